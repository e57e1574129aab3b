// Copyright 2026 The GeoSeek Toolkit Authors
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

#ifndef GEOSEEK_ERROR_HPP
#define GEOSEEK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace geoseek {

// Malformed or inconsistent input data (bad JSONL rows, id mismatches,
// unreadable CSV). Precondition violations on API arguments use
// std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Network-level failure talking to a remote service.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace geoseek

#endif  // GEOSEEK_ERROR_HPP
