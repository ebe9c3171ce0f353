/*
 * Copyright (C) 2026 The hybridnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef HYBRIDNAV__ERROR_HPP
#define HYBRIDNAV__ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridnav {

enum class ErrorCode
{
  InvalidParameter,
  TargetTooClose,
  OutsideRegion,
  OutOfExtent,
  InsufficientData,
  GradientUndefined,
  ZenoGuard,
  LeftDomain,
  InsideObstacle,
  NoSaddleFound,
  ConfigError,
  IoError
};

std::string_view to_string(ErrorCode code);

//==============================================================================
/// Every failure raised by the library carries one of the codes above so the
/// CLI can turn it into a machine-readable error record.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what),
    _code(code)
  {}

  ErrorCode code() const { return _code; }

private:
  ErrorCode _code;
};

} // namespace hybridnav

#endif // HYBRIDNAV__ERROR_HPP
