#include "coskit/aggregates.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "coskit/errors.hpp"
#include "coskit/format.hpp"
#include "coskit/quantile.hpp"

namespace coskit {

namespace {

void check_levels_sorted_distinct(const std::vector<double>& levels,
                                  const std::string& where) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
      throw Error(ErrorCode::BadQuantileLevel,
                  where + ": quantile level " + format_double(levels[i]) +
                      " is not strictly inside (0,1)");
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      throw Error(ErrorCode::BadQuantileLevel,
                  where + ": quantile levels must be sorted and distinct");
    }
  }
}

std::string item_name(const std::string& covariate, const AggregateItem& item) {
  if (item.kind == AggregateItem::Kind::Mean) return covariate + "_mean";
  return covariate + "_q" + format_double(item.level * 100.0);
}

std::string item_token(const AggregateItem& item) {
  if (item.kind == AggregateItem::Kind::Mean) return "mean";
  return "q" + format_double(item.level * 100.0);
}

}  // namespace

std::vector<AggregateItem> AggregateSpec::rules_for(
    const CovariateDef& covariate) const {
  if (const auto it = overrides.find(covariate.name); it != overrides.end()) {
    return it->second;
  }
  if (covariate.kind == CovariateKind::Binary) {
    return {AggregateItem::mean()};
  }
  std::vector<AggregateItem> items;
  items.reserve(default_quantile_levels.size());
  for (double level : default_quantile_levels) {
    items.push_back(AggregateItem::quantile(level));
  }
  return items;
}

void AggregateSpec::validate() const {
  check_levels_sorted_distinct(default_quantile_levels, "default levels");
  for (const auto& [name, items] : overrides) {
    std::vector<double> levels;
    for (const auto& item : items) {
      if (item.kind == AggregateItem::Kind::Quantile) levels.push_back(item.level);
    }
    check_levels_sorted_distinct(levels, "override for '" + name + "'");
  }
}

std::string AggregateSpec::describe(
    const std::vector<CovariateDef>& unit_schema) const {
  std::string out = "{ ";
  for (std::size_t k = 0; k < unit_schema.size(); ++k) {
    if (k > 0) out += ", ";
    out += unit_schema[k].name + " = [";
    const auto items = rules_for(unit_schema[k]);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ",";
      out += "\"" + item_token(items[i]) + "\"";
    }
    out += "]";
  }
  out += " }";
  return out;
}

namespace {

// Minimal tokenizer for the `{ name = ["item", ...], ... }` config form.
struct SpecParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::UsageError,
                "bad aggregate spec at offset " + std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_' || text[pos] == '.')) {
      ++pos;
    }
    if (pos == start) fail("expected covariate name");
    return std::string(text.substr(start, pos - start));
  }

  std::string quoted_string() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '"') fail("expected '\"'");
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != '"') ++pos;
    if (pos >= text.size()) fail("unterminated string");
    std::string out(text.substr(start, pos - start));
    ++pos;
    return out;
  }
};

AggregateItem parse_item(const std::string& token) {
  if (token == "mean") return AggregateItem::mean();
  if (token.size() > 1 && token[0] == 'q') {
    double percent = 0.0;
    const char* begin = token.data() + 1;
    const char* end = token.data() + token.size();
    const auto res = std::from_chars(begin, end, percent);
    if (res.ec == std::errc() && res.ptr == end) {
      const double level = percent / 100.0;
      if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::BadQuantileLevel,
                    "quantile level in '" + token + "' is not strictly inside (0,1)");
      }
      return AggregateItem::quantile(level);
    }
  }
  throw Error(ErrorCode::UsageError,
              "unknown aggregate '" + token + "' (expected \"mean\" or \"qNN\")");
}

}  // namespace

AggregateSpec parse_aggregate_spec(std::string_view text) {
  SpecParser p{text};
  AggregateSpec spec;
  p.expect('{');
  if (!p.eat('}')) {
    do {
      const std::string name = p.identifier();
      p.expect('=');
      p.expect('[');
      std::vector<AggregateItem> items;
      if (!p.eat(']')) {
        do {
          items.push_back(parse_item(p.quoted_string()));
        } while (p.eat(','));
        p.expect(']');
      }
      if (items.empty()) {
        p.fail("covariate '" + name + "' has no aggregates");
      }
      if (!spec.overrides.emplace(name, std::move(items)).second) {
        p.fail("covariate '" + name + "' listed twice");
      }
    } while (p.eat(','));
    p.expect('}');
  }
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  spec.validate();
  return spec;
}

AggregateTable compute_aggregates(const ClusteredDataset& dataset,
                                  const AggregateSpec& spec) {
  spec.validate();

  const auto& schema = dataset.unit_schema();
  std::vector<std::string> names;
  std::vector<std::vector<AggregateItem>> rules(schema.size());
  for (std::size_t k = 0; k < schema.size(); ++k) {
    rules[k] = spec.rules_for(schema[k]);
    for (const auto& item : rules[k]) names.push_back(item_name(schema[k].name, item));
  }

  const int m = dataset.n_clusters();
  Eigen::MatrixXd values(m, static_cast<Eigen::Index>(names.size()));
  const auto& x = dataset.unit_covariates();
  std::vector<double> buf;
  for (int j = 0; j < m; ++j) {
    const auto& members = dataset.cluster_members()[j];
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < schema.size(); ++k) {
      buf.clear();
      buf.reserve(members.size());
      for (int i : members) buf.push_back(x(i, static_cast<Eigen::Index>(k)));
      // Sorting first makes every aggregate an exact function of the value
      // multiset: the mean sums in sorted order, so shuffling units within a
      // cluster cannot change any output bit.
      std::sort(buf.begin(), buf.end());
      for (const auto& item : rules[k]) {
        if (item.kind == AggregateItem::Kind::Mean) {
          double sum = 0.0;
          for (double v : buf) sum += v;
          values(j, col++) = sum / static_cast<double>(buf.size());
        } else {
          values(j, col++) = quantile_sorted(buf, item.level);
        }
      }
    }
  }
  return AggregateTable(std::move(names), std::move(values), dataset.cluster_ids());
}

Eigen::MatrixXd attach_aggregates(const ClusteredDataset& dataset,
                                  const AggregateTable& table) {
  // Map table rows by cluster id; the table must cover every cluster.
  std::unordered_map<std::string, int> row_of;
  row_of.reserve(table.cluster_ids().size());
  for (std::size_t r = 0; r < table.cluster_ids().size(); ++r) {
    row_of.emplace(table.cluster_ids()[r], static_cast<int>(r));
  }
  std::vector<int> cluster_row(dataset.n_clusters());
  for (int j = 0; j < dataset.n_clusters(); ++j) {
    const auto it = row_of.find(dataset.cluster_ids()[j]);
    if (it == row_of.end()) {
      throw Error(ErrorCode::MissingClusterRow,
                  "aggregate table has no row for cluster '" +
                      dataset.cluster_ids()[j] + "'");
    }
    cluster_row[j] = it->second;
  }

  Eigen::MatrixXd out(dataset.n_units(), table.values().cols());
  const auto& cluster = dataset.unit_cluster();
  for (int i = 0; i < dataset.n_units(); ++i) {
    out.row(i) = table.values().row(cluster_row[cluster[i]]);
  }
  return out;
}

}  // namespace coskit
