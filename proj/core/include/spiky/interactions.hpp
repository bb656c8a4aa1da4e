#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace spiky {

/// One aggregated (item, context) interaction with a strictly positive weight.
struct Interaction {
  std::int64_t item = 0;
  std::int64_t context = 0;
  double weight = 0.0;
};

/// Parsed interaction table: a rectangular item x context weight matrix in
/// coordinate form, with stable first-seen index assignment for both id
/// spaces and no duplicate (item, context) pairs.
class InteractionTriples {
 public:
  const std::vector<Interaction>& records() const noexcept { return records_; }
  std::int64_t num_items() const noexcept { return static_cast<std::int64_t>(item_ids_.size()); }
  std::int64_t num_contexts() const noexcept {
    return static_cast<std::int64_t>(context_ids_.size());
  }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
  const std::vector<std::string>& context_ids() const noexcept { return context_ids_; }

  /// Returns -1 when the id is unknown.
  std::int64_t item_index(const std::string& id) const;
  std::int64_t context_index(const std::string& id) const;

  bool empty() const noexcept { return records_.empty(); }

 private:
  friend InteractionTriples parse_interactions(std::istream& in);

  std::vector<Interaction> records_;
  std::vector<std::string> item_ids_;
  std::vector<std::string> context_ids_;
  std::unordered_map<std::string, std::int64_t> item_lookup_;
  std::unordered_map<std::string, std::int64_t> context_lookup_;
};

/// Parses tab-separated `item_id\tcontext_id\tweight` lines (weight optional,
/// default 1). Empty lines and lines starting with '#' are skipped. Duplicate
/// pairs are summed; zero-weight records are dropped before any index is
/// assigned. Malformed lines raise ParseError with the 1-based line number.
InteractionTriples parse_interactions(std::istream& in);

}  // namespace spiky
