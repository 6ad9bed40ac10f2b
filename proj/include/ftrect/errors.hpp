#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ftrect {

/// Configuration rejected before any simulation. Each issue is "field.path: message".
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Raised from inside a run when the state leaves the valid region (v_dc <= 0, NaN, ...).
class SimulationAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects issues and throws a single ValidationError at the end.
class IssueList {
 public:
  void add(std::string path, const std::string& message) { items_.push_back(std::move(path) + ": " + message); }
  void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) add(path, message);
  }
  void merge(const IssueList& other, const std::string& prefix);
  bool empty() const noexcept { return items_.empty(); }
  const std::vector<std::string>& items() const noexcept { return items_; }
  void throw_if_any() const;

 private:
  std::vector<std::string> items_;
};

}  // namespace ftrect
