#ifndef WALSHLAB_CSV_H_
#define WALSHLAB_CSV_H_

// Plain-text artifacts.
//
// Grid files (step functions and spectra):
//   # walsh-lab <stepfn|spectrum> dim=<1|2> bits_x=<n> [bits_y=<m>]
// followed by one value per line (1D) or one comma-separated row of 2^m
// values per x cell (2D), in cell-index order.
//
// Tables: a header line of column names, then rows. Doubles are written in
// the shortest form that parses back to the same value.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "walshlab/dyadic.h"
#include "walshlab/hardy.h"
#include "walshlab/walsh.h"

namespace walshlab {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CsvCell = std::variant<std::string, long long, double>;
using CsvRow = std::vector<CsvCell>;

std::string format_number(double v);

std::string render_csv(const std::vector<std::string>& columns,
                       const std::vector<CsvRow>& rows);

// Writes via a temporary file and a rename, so a failure leaves no partial
// artifact behind.
void write_text_file(const std::filesystem::path& path, const std::string& text);

void emit_csv(const std::vector<std::string>& columns,
              const std::vector<CsvRow>& rows, const std::filesystem::path& path);

std::string render_grid(const StepFn1& f);
std::string render_grid(const StepFn2& f);
std::string render_grid(const Spectrum1& s);
std::string render_grid(const Spectrum2& s);

struct GridFile {
  std::string kind;  // "stepfn" or "spectrum"
  int dim = 1;
  int bits_x = 0;
  int bits_y = 0;
  StepFn2::Matrix values;  // 1D grids are stored as a single column

  StepFn1 as_stepfn1() const;
  StepFn2 as_stepfn2() const;
  Spectrum1 as_spectrum1() const;
  Spectrum2 as_spectrum2() const;
};

GridFile parse_grid(const std::string& text);
GridFile read_grid(const std::filesystem::path& path);

// Manifest of an atomic decomposition: columns mu,p,cube_level,path with
// atom paths relative to the manifest. Corners are recovered from the
// support of each atom.
void write_manifest(const AtomicDecomposition& d, const std::filesystem::path& path);
AtomicDecomposition read_manifest(const std::filesystem::path& path);

}  // namespace walshlab

#endif  // WALSHLAB_CSV_H_
