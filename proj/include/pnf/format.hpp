// Copyright 2026 The pnf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PNF_FORMAT_HPP_
#define PNF_FORMAT_HPP_

#include <string>

namespace pnf {

/// Significant digits used for every printed number.
inline constexpr int kPrintDigits = 12;

/// "%.12g" in the C locale; "inf", "-inf" and "nan" for non-finite input.
std::string format_number(double value, int digits = kPrintDigits);

/// Rounds to `digits` significant digits so serialized JSON matches the
/// text output. Non-finite values pass through.
double round_significant(double value, int digits = kPrintDigits);

}  // namespace pnf

#endif  // PNF_FORMAT_HPP_
