#pragma once

namespace infheat {

/// Worker threads used by slice updates; n <= 0 keeps the runtime default.
/// A no-op when built without OpenMP.
void set_thread_count(int n);
int thread_count();

}  // namespace infheat
