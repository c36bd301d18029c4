// Copyright 2026 The rinq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace rinq {

// Base of everything the library throws. `stage()` is empty until a pipeline
// driver relabels the error with the step that failed.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Caller passed arguments outside an operation's domain (tau out of range,
// unknown format, dimension mismatch).
class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyStructureError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  FetchError(int status, const std::string& what) : Error(what), status_(status) {}
  // HTTP status, or 0 when no response was received.
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input for which the requested quantity is undefined, e.g. an edgeless graph
// has no normalized degree vector.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class SweepError : public Error {
 public:
  SweepError(int level, const std::string& what) : Error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

// Wraps any of the above with the name of the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace rinq
