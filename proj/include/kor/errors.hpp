/*
 * Copyright 2026 The kor-sketch Authors
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
 */

#pragma once

#include <stdexcept>
#include <string>

namespace kor {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParams : public Error {
 public:
  explicit InvalidParams(const std::string& reason)
      : Error("invalid params: " + reason) {}
};

class InvalidWeight : public Error {
 public:
  explicit InvalidWeight(const std::string& reason)
      : Error("invalid weight: " + reason) {}
};

class UnknownElement : public Error {
 public:
  explicit UnknownElement(const std::string& reason)
      : Error("unknown element: " + reason) {}
};

class DuplicateElement : public Error {
 public:
  explicit DuplicateElement(const std::string& reason)
      : Error("duplicate element: " + reason) {}
};

class ParamsMismatch : public Error {
 public:
  explicit ParamsMismatch(const std::string& reason)
      : Error("params mismatch: " + reason) {}
};

class PrivacyPreconditionViolated : public Error {
 public:
  explicit PrivacyPreconditionViolated(const std::string& reason)
      : Error("privacy precondition violated: " + reason) {}
};

class DegenerateNoise : public Error {
 public:
  explicit DegenerateNoise(const std::string& reason)
      : Error("degenerate noise: " + reason) {}
};

class CorruptHeader : public Error {
 public:
  explicit CorruptHeader(const std::string& reason)
      : Error("corrupt header: " + reason) {}
};

class VersionMismatch : public Error {
 public:
  explicit VersionMismatch(const std::string& reason)
      : Error("version mismatch: " + reason) {}
};

class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string& reason)
      : Error("length mismatch: " + reason) {}
};

class CalibrationFailed : public Error {
 public:
  explicit CalibrationFailed(const std::string& reason)
      : Error("calibration failed: " + reason) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& reason) : Error("io error: " + reason) {}
};

}  // namespace kor
