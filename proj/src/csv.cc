#include "walshlab/csv.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace walshlab {
namespace {

std::string cell_text(const CsvCell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return format_number(std::get<double>(c));
}

std::string grid_header(const char* kind, int dim, int bx, int by) {
  std::string h = std::string("# walsh-lab ") + kind + " dim=" + std::to_string(dim) +
                  " bits_x=" + std::to_string(bx);
  if (dim == 2) h += " bits_y=" + std::to_string(by);
  return h + "\n";
}

template <typename Vec>
std::string render_1d(const char* kind, Resolution r, const Vec& v) {
  std::string out = grid_header(kind, 1, r.bits(), 0);
  for (Index i = 0; i < v.size(); ++i) {
    out += format_number(v[i]);
    out += '\n';
  }
  return out;
}

template <typename Mat>
std::string render_2d(const char* kind, Resolution rx, Resolution ry, const Mat& m) {
  std::string out = grid_header(kind, 2, rx.bits(), ry.bits());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw CsvError("not a number: '" + token + "'");
  }
  if (used != token.size()) throw CsvError("not a number: '" + token + "'");
  return v;
}

int parse_int_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw CsvError("expected " + prefix + " in header");
  int v = 0;
  const char* begin = token.data() + prefix.size();
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || v < 0) throw CsvError("bad header field " + token);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Smallest dyadic cube at `level` containing every nonzero cell.
std::pair<std::uint64_t, std::uint64_t> infer_corner(const StepFn2& f, int level) {
  const int sx = f.res_x().bits() - level;
  const int sy = f.res_y().bits() - level;
  for (Index i = 0; i < f.values().rows(); ++i) {
    for (Index j = 0; j < f.values().cols(); ++j) {
      if (f(i, j) != 0.0) {
        return {static_cast<std::uint64_t>(i >> sx), static_cast<std::uint64_t>(j >> sy)};
      }
    }
  }
  return {0, 0};
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string render_csv(const std::vector<std::string>& columns,
                       const std::vector<CsvRow>& rows) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw CsvError("row arity " + std::to_string(row.size()) +
                     " does not match schema of " + std::to_string(columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_text(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CsvError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw CsvError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw CsvError("cannot write " + path.string());
  }
}

void emit_csv(const std::vector<std::string>& columns,
              const std::vector<CsvRow>& rows, const std::filesystem::path& path) {
  write_text_file(path, render_csv(columns, rows));
}

std::string render_grid(const StepFn1& f) {
  return render_1d("stepfn", f.resolution(), f.values());
}
std::string render_grid(const StepFn2& f) {
  return render_2d("stepfn", f.res_x(), f.res_y(), f.values());
}
std::string render_grid(const Spectrum1& s) {
  return render_1d("spectrum", s.resolution(), s.coeffs());
}
std::string render_grid(const Spectrum2& s) {
  return render_2d("spectrum", s.res_x(), s.res_y(), s.coeffs());
}

GridFile parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty grid file");
  const auto head = split(strip(line), ' ');
  if (head.size() < 4 || head[0] != "#" || head[1] != "walsh-lab") {
    throw CsvError("missing '# walsh-lab' header");
  }
  GridFile g;
  g.kind = head[2];
  if (g.kind != "stepfn" && g.kind != "spectrum") throw CsvError("unknown grid kind " + g.kind);
  g.dim = parse_int_field(head[3], "dim");
  if (g.dim != 1 && g.dim != 2) throw CsvError("dim must be 1 or 2");
  if (head.size() != static_cast<std::size_t>(g.dim == 1 ? 5 : 6)) {
    throw CsvError("malformed header");
  }
  g.bits_x = parse_int_field(head[4], "bits_x");
  if (g.dim == 2) g.bits_y = parse_int_field(head[5], "bits_y");
  const Limits caps;
  if (g.dim == 1 ? g.bits_x > caps.max_bits_1d
                 : g.bits_x > caps.max_bits_per_axis || g.bits_y > caps.max_bits_per_axis) {
    throw CsvError("grid exceeds the resolution cap");
  }

  const Index rows = Index{1} << g.bits_x;
  const Index cols = g.dim == 2 ? (Index{1} << g.bits_y) : 1;
  g.values.resize(rows, cols);
  Index r = 0;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    if (r >= rows) throw CsvError("too many rows");
    const auto cells = split(line, ',');
    if (static_cast<Index>(cells.size()) != cols) throw CsvError("wrong row width");
    for (Index c = 0; c < cols; ++c) g.values(r, c) = parse_double(cells[static_cast<std::size_t>(c)]);
    ++r;
  }
  if (r != rows) throw CsvError("too few rows");
  return g;
}

GridFile read_grid(const std::filesystem::path& path) {
  return parse_grid(read_file(path));
}

StepFn1 GridFile::as_stepfn1() const {
  if (kind != "stepfn" || dim != 1) throw CsvError("expected a 1D stepfn grid");
  return StepFn1(Resolution(bits_x), values.col(0));
}
StepFn2 GridFile::as_stepfn2() const {
  if (kind != "stepfn" || dim != 2) throw CsvError("expected a 2D stepfn grid");
  return StepFn2(Resolution(bits_x), Resolution(bits_y), values);
}
Spectrum1 GridFile::as_spectrum1() const {
  if (kind != "spectrum" || dim != 1) throw CsvError("expected a 1D spectrum grid");
  return Spectrum1(Resolution(bits_x), values.col(0));
}
Spectrum2 GridFile::as_spectrum2() const {
  if (kind != "spectrum" || dim != 2) throw CsvError("expected a 2D spectrum grid");
  return Spectrum2(Resolution(bits_x), Resolution(bits_y), values);
}

void write_manifest(const AtomicDecomposition& d, const std::filesystem::path& path) {
  const std::filesystem::path dir = path.parent_path();
  const std::string stem = path.stem().string();
  std::vector<CsvRow> rows;
  for (std::size_t k = 0; k < d.entries.size(); ++k) {
    const auto& e = d.entries[k];
    const std::string name = stem + "_atom" + std::to_string(k) + ".csv";
    write_text_file(dir / name, render_grid(e.atom.fn));
    rows.push_back({e.weight, e.atom.p, static_cast<long long>(e.atom.cube_level), name});
  }
  emit_csv({"mu", "p", "cube_level", "path"}, rows, path);
}

AtomicDecomposition read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || strip(line) != "mu,p,cube_level,path") {
    throw CsvError("manifest header must be mu,p,cube_level,path");
  }
  AtomicDecomposition d;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw CsvError("manifest rows need 4 fields");
    Atom atom;
    atom.p = parse_double(cells[1]);
    atom.cube_level = parse_int_field("l=" + cells[2], "l");
    std::filesystem::path atom_path = cells[3];
    if (atom_path.is_relative()) atom_path = path.parent_path() / atom_path;
    atom.fn = read_grid(atom_path).as_stepfn2();
    if (atom.cube_level > std::min(atom.fn.res_x().bits(), atom.fn.res_y().bits())) {
      throw CsvError("cube level finer than the atom grid");
    }
    const auto [cx, cy] = infer_corner(atom.fn, atom.cube_level);
    atom.corner_x = DyadicPoint(Resolution(atom.cube_level), cx);
    atom.corner_y = DyadicPoint(Resolution(atom.cube_level), cy);
    d.entries.push_back({parse_double(cells[0]), std::move(atom)});
  }
  return d;
}

}  // namespace walshlab
