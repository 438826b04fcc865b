// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cfsound {

inline int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Resolves a user-facing thread-count setting (0 = auto) to a concrete count.
inline int resolve_threads(int requested) {
    if (requested < 0)
        throw std::invalid_argument("thread count must be >= 0.");
    return requested == 0 ? hardware_threads() : requested;
}

// Runs body(i) for i in [0, n) on up to n_threads threads using a static
// block partition. Each index is visited exactly once by exactly one thread,
// so a body that writes only to slot i of a preallocated buffer produces
// output independent of the thread count. The first exception thrown by any
// body is rethrown on the caller.
template <typename F>
void parallel_for(std::size_t n, int n_threads, F&& body) {
    n_threads = resolve_threads(n_threads);
    if (n == 0)
        return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    const std::size_t t_count =
        std::min(static_cast<std::size_t>(n_threads), n);
    std::vector<std::exception_ptr> errors(t_count);
    std::vector<std::thread> workers;
    workers.reserve(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        const std::size_t begin = n * t / t_count;
        const std::size_t end = n * (t + 1) / t_count;
        workers.emplace_back([&, t, begin, end]() {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers)
        w.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace cfsound
