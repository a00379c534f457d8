#include "prgd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "prgd/errors.hpp"

namespace prgd {

// ---------------------------------------------------------------------------
// PcaProblem

PcaProblem::PcaProblem(SymMatrix a)
    : a_(std::move(a)), norm_a_(operator_norm(a_)), sphere_(std::make_shared<Sphere>(a_.dim())) {}

void PcaProblem::require_on_sphere(const Point& x) const {
  if (x.kind() != ManifoldKind::sphere) {
    throw InvalidArgument("PcaProblem: point is not on the sphere");
  }
  sphere_->require_member(x);
}

double PcaProblem::value(const Point& x) const {
  require_on_sphere(x);
  return -0.5 * a_.quadratic_form(x.coords());
}

Vector PcaProblem::euclidean_gradient(const Point& x) const {
  require_on_sphere(x);
  return -a_.apply(x.coords());
}

ProblemConstants PcaProblem::constants() const noexcept {
  return {2.5 * norm_a_, 9.0 * norm_a_, std::numeric_limits<double>::infinity()};
}

double PcaProblem::optimal_value() const {
  const Spectrum spec = eigendecompose(a_);
  return -0.5 * spec.values(spec.values.size() - 1);
}

// ---------------------------------------------------------------------------
// QuadraticSaddle

QuadraticSaddle::QuadraticSaddle(SymMatrix h)
    : h_(std::move(h)), space_(std::make_shared<EuclideanSpace>(h_.dim())) {}

double QuadraticSaddle::value(const Point& x) const {
  space_->require_member(x);
  return 0.5 * h_.quadratic_form(x.coords());
}

Vector QuadraticSaddle::euclidean_gradient(const Point& x) const {
  space_->require_member(x);
  return h_.apply(x.coords());
}

ProblemConstants QuadraticSaddle::constants(double nominal_rho) const {
  if (!(nominal_rho >= 0.0)) throw InvalidArgument("QuadraticSaddle: rho must be non-negative");
  return {operator_norm(h_), nominal_rho, std::numeric_limits<double>::infinity()};
}

// ---------------------------------------------------------------------------

SyntheticSpectrum synthetic_pca_matrix(Eigen::Index d, const RngStream& rng) {
  if (d < 2) throw InvalidArgument("synthetic_pca_matrix: dimension must be >= 2");
  Vector lambda(d);
  lambda(0) = 2.0;
  lambda(1) = 1.0;
  for (Eigen::Index k = 2; k < d; ++k) {
    // 1-based index k+1 gives 1 - ((k+1) - 2) / d.
    lambda(k) = 1.0 - static_cast<double>(k - 1) / static_cast<double>(d);
  }
  auto [q, next] = sample_rotation(d, rng);
  (void)next;
  Matrix a = q * lambda.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose());
  return {SymMatrix(a), lambda, q};
}

// ---------------------------------------------------------------------------
// Matrix text format

namespace {

// Next non-empty line with comments stripped. Returns false at end of input.
bool next_content_line(std::istream& in, std::string& out, int& line_no) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") != std::string::npos) {
      out = raw;
      return true;
    }
  }
  return false;
}

double parse_double(const std::string& token, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse '" + token + "' as a number", line_no);
  }
  if (used != token.size()) throw InvalidInput("cannot parse '" + token + "' as a number", line_no);
  if (!std::isfinite(v)) throw InvalidInput("non-finite entry '" + token + "'", line_no);
  return v;
}

}  // namespace

SymMatrix read_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) throw InvalidInput("empty matrix file");

  long long n = 0;
  {
    std::istringstream header(line);
    std::string token, extra;
    header >> token;
    if (header >> extra) throw InvalidInput("first line must hold only the dimension", line_no);
    std::size_t used = 0;
    try {
      n = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse dimension '" + token + "'", line_no);
    }
    if (used != token.size() || n < 1) throw InvalidInput("dimension must be a positive integer", line_no);
    if (n > kMaxDenseDim) throw InvalidInput("dimension exceeds " + std::to_string(kMaxDenseDim), line_no);
  }

  Matrix m(n, n);
  std::vector<int> row_line(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!next_content_line(in, line, line_no)) {
      throw InvalidInput("expected " + std::to_string(n) + " rows, found " + std::to_string(i), line_no + 1);
    }
    std::istringstream row(line);
    std::vector<std::string> tokens;
    for (std::string t; row >> t;) tokens.push_back(t);
    if (static_cast<long long>(tokens.size()) != n) {
      throw InvalidInput("row has " + std::to_string(tokens.size()) + " entries, expected " + std::to_string(n),
                         line_no);
    }
    for (long long j = 0; j < n; ++j) m(i, j) = parse_double(tokens[static_cast<std::size_t>(j)], line_no);
    row_line[static_cast<std::size_t>(i)] = line_no;
  }
  if (next_content_line(in, line, line_no)) throw InvalidInput("trailing content after matrix rows", line_no);

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::Index worst_i = 0, worst_j = 0;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff(&worst_i, &worst_j);
  if (asym > 1e-9 * scale) {
    const Eigen::Index later = std::max(worst_i, worst_j);
    std::ostringstream os;
    os << "matrix is not symmetric: |m(" << worst_i << "," << worst_j << ") - m(" << worst_j << "," << worst_i
       << ")| = " << asym;
    throw InvalidInput(os.str(), row_line[static_cast<std::size_t>(later)]);
  }
  return SymMatrix(0.5 * (m + m.transpose()));
}

SymMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file '" + path.string() + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SymMatrix& m) {
  out << m.dim() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j > 0) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

void save_matrix(const std::filesystem::path& path, const SymMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write matrix file '" + path.string() + "'");
  write_matrix(out, m);
}

}  // namespace prgd
