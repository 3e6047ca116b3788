#pragma once

#include <stdexcept>
#include <string>

namespace rvseg {

// Error taxonomy shared by all modules. The leading token of what() is a
// stable machine-checkable tag ("EmptyBox: ..."), the rest is context.
class Error : public std::runtime_error {
 public:
  Error(const std::string& tag, const std::string& detail)
      : std::runtime_error(detail.empty() ? tag : tag + ": " + detail) {}
};

struct EmptyBoxError : Error {
  explicit EmptyBoxError(const std::string& detail = "")
      : Error("EmptyBox", detail) {}
};

struct ShapeMismatchError : Error {
  explicit ShapeMismatchError(const std::string& detail = "")
      : Error("ShapeMismatch", detail) {}
};

struct InvalidProbabilityError : Error {
  explicit InvalidProbabilityError(const std::string& detail = "")
      : Error("InvalidProbability", detail) {}
};

struct NoPredictionsError : Error {
  explicit NoPredictionsError(const std::string& detail = "")
      : Error("NoPredictions", detail) {}
};

struct TopKTooLargeError : Error {
  explicit TopKTooLargeError(const std::string& detail = "")
      : Error("TopKTooLarge", detail) {}
};

struct BadScriptError : Error {
  explicit BadScriptError(const std::string& detail = "")
      : Error("BadScript", detail) {}
};

struct NoSamplesError : Error {
  explicit NoSamplesError(const std::string& detail = "")
      : Error("NoSamples", detail) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& detail = "")
      : Error("Config", detail) {}
};

}  // namespace rvseg
