#include "coskit/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "coskit/errors.hpp"
#include "coskit/format.hpp"

namespace coskit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, const std::string& file,
                    std::size_t line_no, const std::string& column) {
  if (field.empty()) {
    throw Error(ErrorCode::MissingValue, file + ":" + std::to_string(line_no) +
                                             ": empty value in column '" +
                                             column + "'");
  }
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::BadNumericField,
                file + ":" + std::to_string(line_no) + ": '" + field +
                    "' in column '" + column + "' is not a number");
  }
  return value;
}

// Reads all non-comment lines; strips a trailing \r so CRLF input loads.
std::vector<std::pair<std::size_t, std::string>> read_lines(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  }
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.emplace_back(line_no, std::move(line));
    line.clear();
  }
  return lines;
}

void check_fixed_header(const std::vector<std::string>& fields,
                        const std::vector<std::string>& expected,
                        const std::string& file) {
  if (fields.size() < expected.size()) {
    throw Error(ErrorCode::BadHeader,
                file + ": header has " + std::to_string(fields.size()) +
                    " columns, expected at least " +
                    std::to_string(expected.size()));
  }
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (fields[k] != expected[k]) {
      throw Error(ErrorCode::BadHeader, file + ": header column " +
                                            std::to_string(k + 1) + " is '" +
                                            fields[k] + "', expected '" +
                                            expected[k] + "'");
    }
  }
  for (std::size_t k = expected.size(); k < fields.size(); ++k) {
    if (fields[k].empty()) {
      throw Error(ErrorCode::BadHeader,
                  file + ": empty covariate name in header");
    }
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // \n line endings on all platforms
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  }
  return out;
}

void write_comments(std::ofstream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) out << "# " << line << "\n";
}

}  // namespace

ClusteredDataset load_csv_pair(const std::filesystem::path& units_path,
                               const std::filesystem::path& clusters_path) {
  const std::string ufile = units_path.filename().string();
  const std::string cfile = clusters_path.filename().string();

  const auto ulines = read_lines(units_path);
  const auto clines = read_lines(clusters_path);
  if (ulines.empty()) throw Error(ErrorCode::BadHeader, ufile + ": empty file");
  if (clines.empty()) throw Error(ErrorCode::BadHeader, cfile + ": empty file");

  const auto uheader = split_fields(ulines[0].second);
  check_fixed_header(uheader, {"unit_id", "cluster_id", "y"}, ufile);
  const auto cheader = split_fields(clines[0].second);
  check_fixed_header(cheader, {"cluster_id", "a"}, cfile);

  std::vector<Unit> units;
  units.reserve(ulines.size() - 1);
  for (std::size_t r = 1; r < ulines.size(); ++r) {
    const auto& [line_no, line] = ulines[r];
    const auto fields = split_fields(line);
    if (fields.size() != uheader.size()) {
      throw Error(ErrorCode::BadNumericField,
                  ufile + ":" + std::to_string(line_no) + ": row has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(uheader.size()));
    }
    Unit u;
    u.unit_id = fields[0];
    u.cluster_id = fields[1];
    u.outcome = parse_double(fields[2], ufile, line_no, "y");
    for (std::size_t k = 3; k < fields.size(); ++k) {
      u.covariates.emplace_back(uheader[k],
                                parse_double(fields[k], ufile, line_no, uheader[k]));
    }
    units.push_back(std::move(u));
  }

  std::vector<Cluster> clusters;
  clusters.reserve(clines.size() - 1);
  for (std::size_t r = 1; r < clines.size(); ++r) {
    const auto& [line_no, line] = clines[r];
    const auto fields = split_fields(line);
    if (fields.size() != cheader.size()) {
      throw Error(ErrorCode::BadNumericField,
                  cfile + ":" + std::to_string(line_no) + ": row has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(cheader.size()));
    }
    Cluster c;
    c.cluster_id = fields[0];
    if (fields[1] == "0") {
      c.treatment = 0;
    } else if (fields[1] == "1") {
      c.treatment = 1;
    } else {
      throw Error(ErrorCode::BadNumericField,
                  cfile + ":" + std::to_string(line_no) + ": 'a' must be 0 or 1, got '" +
                      fields[1] + "'");
    }
    for (std::size_t k = 2; k < fields.size(); ++k) {
      c.covariates.emplace_back(cheader[k],
                                parse_double(fields[k], cfile, line_no, cheader[k]));
    }
    clusters.push_back(std::move(c));
  }

  return build_dataset(units, clusters);
}

void save_csv_pair(const ClusteredDataset& dataset,
                   const std::filesystem::path& units_path,
                   const std::filesystem::path& clusters_path,
                   const std::vector<std::string>& header_comment) {
  {
    auto out = open_out(units_path);
    write_comments(out, header_comment);
    out << "unit_id,cluster_id,y";
    for (const auto& def : dataset.unit_schema()) out << "," << def.name;
    out << "\n";
    const auto& x = dataset.unit_covariates();
    for (int i = 0; i < dataset.n_units(); ++i) {
      out << dataset.unit_ids()[i] << ","
          << dataset.cluster_ids()[dataset.unit_cluster()[i]] << ","
          << format_double(dataset.outcomes()(i));
      for (Eigen::Index k = 0; k < x.cols(); ++k) {
        out << "," << format_double(x(i, k));
      }
      out << "\n";
    }
  }
  {
    auto out = open_out(clusters_path);
    write_comments(out, header_comment);
    out << "cluster_id,a";
    for (const auto& def : dataset.cluster_schema()) out << "," << def.name;
    out << "\n";
    const auto& w = dataset.cluster_covariates();
    for (int j = 0; j < dataset.n_clusters(); ++j) {
      out << dataset.cluster_ids()[j] << "," << dataset.treatment()[j];
      for (Eigen::Index k = 0; k < w.cols(); ++k) {
        out << "," << format_double(w(j, k));
      }
      out << "\n";
    }
  }
}

void save_truth(const std::vector<TruthRecord>& rows,
                const std::filesystem::path& path,
                const std::vector<std::string>& header_comment) {
  auto out = open_out(path);
  write_comments(out, header_comment);
  out << "unit_id,y1,y0,ite\n";
  for (const auto& row : rows) {
    out << row.unit_id << "," << format_double(row.y1) << ","
        << format_double(row.y0) << "," << format_double(row.ite) << "\n";
  }
}

std::vector<TruthRecord> load_truth(const std::filesystem::path& path) {
  const std::string file = path.filename().string();
  const auto lines = read_lines(path);
  if (lines.empty()) throw Error(ErrorCode::BadHeader, file + ": empty file");
  const auto header = split_fields(lines[0].second);
  check_fixed_header(header, {"unit_id", "y1", "y0", "ite"}, file);
  if (header.size() != 4) {
    throw Error(ErrorCode::BadHeader, file + ": expected exactly 4 columns");
  }
  std::vector<TruthRecord> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [line_no, line] = lines[r];
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::BadNumericField,
                  file + ":" + std::to_string(line_no) + ": expected 4 fields");
    }
    rows.push_back({fields[0], parse_double(fields[1], file, line_no, "y1"),
                    parse_double(fields[2], file, line_no, "y0"),
                    parse_double(fields[3], file, line_no, "ite")});
  }
  return rows;
}

}  // namespace coskit
