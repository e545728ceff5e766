#ifndef COSKIT_CSV_IO_HPP
#define COSKIT_CSV_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "coskit/data_model.hpp"

namespace coskit {

// CSV pair format.  Units file: `unit_id,cluster_id,y,<x...>`; clusters
// file: `cluster_id,a,<w...>`.  UTF-8, comma separated, `.` decimal
// separator, `a` must be 0 or 1.  Missing or non-numeric cells are errors.
// Lines starting with `#` are treated as comments and skipped, which is how
// generated files carry their provenance header.
ClusteredDataset load_csv_pair(const std::filesystem::path& units_path,
                               const std::filesystem::path& clusters_path);

// Writes the pair back out.  `header_comment` lines (if any) are emitted as
// `# ...` lines before the column header of both files.
void save_csv_pair(const ClusteredDataset& dataset,
                   const std::filesystem::path& units_path,
                   const std::filesystem::path& clusters_path,
                   const std::vector<std::string>& header_comment = {});

// Ground-truth file written next to a simulated pair:
// `unit_id,y1,y0,ite`.
struct TruthRecord {
  std::string unit_id;
  double y1 = 0.0;
  double y0 = 0.0;
  double ite = 0.0;
};

void save_truth(const std::vector<TruthRecord>& rows,
                const std::filesystem::path& path,
                const std::vector<std::string>& header_comment = {});

std::vector<TruthRecord> load_truth(const std::filesystem::path& path);

}  // namespace coskit

#endif  // COSKIT_CSV_IO_HPP
