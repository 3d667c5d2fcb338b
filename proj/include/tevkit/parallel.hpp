// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The tevkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TEVKIT_PARALLEL_HPP
#define TEVKIT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tevkit
{
// Process-wide worker count used by parallel_rows. Defaults to 1.
void set_thread_count(int n);
int thread_count();

// Splits [0, n) into contiguous chunks, one per worker, and calls
// fn(begin, end) for each. Work inside fn must only touch state owned by
// its index range; reductions are done by the caller in index order so
// results never depend on the worker count.
void parallel_rows(int n, const std::function<void(int, int)> & fn);

}  // namespace tevkit

#endif  // TEVKIT_PARALLEL_HPP
