#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

// Base for all named library errors. `name()` is a stable machine-readable
// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& detail)
      : std::runtime_error(detail), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

}  // namespace qsync
