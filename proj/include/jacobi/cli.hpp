#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace jacobi::cli {

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;  // det | spectrum | singularities | scatter | pavlov | metrics
  std::string action;   // forward | inverse | roundtrip, build | verify
  std::string spec_path, data_path, points_path, out_path, spec_out;
  Format format = Format::Csv;
  std::uint64_t seed = 0x5eed;

  std::string engine = "volterra";
  double radius = 0.9;
  int grid = 64;
  int order = 64;
  int oracle_m = 400;
  double match_tol = 1e-6;
  int singular_grid = 4096;
  int grid_k = 14;
  int n_max = -1;
  double tol = 1e-6;
  double gamma = 0.3, kappa = 0.0;
  int pavlov_nmax = 800;
  int nodes = 0;
  int count = 3;
  int cantor_depth = -1;

  // throws DomainError on an invalid knob
  void validate() const;
};

using Cell = std::variant<long long, double, bool, std::string>;

// CSV: header plus one line per row, doubles as %.17g; JSON: array of objects keyed by column
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }
  std::string render(Format format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// exit status: 0 success, 1 error, 2 verification mismatch
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jacobi::cli
