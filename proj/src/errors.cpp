#include "ftrect/errors.hpp"

namespace ftrect {
namespace {

std::string join(const std::vector<std::string>& issues) {
  std::string out = "invalid configuration";
  for (const auto& issue : issues) {
    out += "\n  ";
    out += issue;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}

void IssueList::merge(const IssueList& other, const std::string& prefix) {
  for (const auto& item : other.items_) {
    items_.push_back(prefix.empty() ? item : prefix + "." + item);
  }
}

void IssueList::throw_if_any() const {
  if (!items_.empty()) throw ValidationError(items_);
}

}  // namespace ftrect
