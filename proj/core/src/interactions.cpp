#include "spiky/interactions.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <string_view>

#include "spiky/errors.hpp"

namespace spiky {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_weight(std::string_view field, std::uint64_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("non-numeric weight '" + std::string(field) + "'", line_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite weight '" + std::string(field) + "'", line_no);
  }
  if (value < 0.0) {
    throw ParseError("negative weight '" + std::string(field) + "'", line_no);
  }
  return value;
}

}  // namespace

std::int64_t InteractionTriples::item_index(const std::string& id) const {
  auto it = item_lookup_.find(id);
  return it == item_lookup_.end() ? -1 : it->second;
}

std::int64_t InteractionTriples::context_index(const std::string& id) const {
  auto it = context_lookup_.find(id);
  return it == context_lookup_.end() ? -1 : it->second;
}

InteractionTriples parse_interactions(std::istream& in) {
  InteractionTriples out;
  // (item, context) -> position in out.records_
  std::unordered_map<std::uint64_t, std::size_t> seen;

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected 2 or 3 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError("empty id field", line_no);
    }
    double weight = fields.size() == 3 ? parse_weight(fields[2], line_no) : 1.0;
    if (weight == 0.0) continue;  // dropped before any index is assigned

    auto intern = [](std::string_view id, std::vector<std::string>& ids,
                     std::unordered_map<std::string, std::int64_t>& lookup) {
      auto [it, inserted] = lookup.try_emplace(std::string(id),
                                               static_cast<std::int64_t>(ids.size()));
      if (inserted) ids.emplace_back(id);
      return it->second;
    };
    std::int64_t item = intern(fields[0], out.item_ids_, out.item_lookup_);
    std::int64_t context = intern(fields[1], out.context_ids_, out.context_lookup_);

    std::uint64_t key = (static_cast<std::uint64_t>(item) << 32) |
                        static_cast<std::uint64_t>(context);
    auto [it, inserted] = seen.try_emplace(key, out.records_.size());
    if (inserted) {
      out.records_.push_back({item, context, weight});
    } else {
      out.records_[it->second].weight += weight;
    }
  }
  return out;
}

}  // namespace spiky
