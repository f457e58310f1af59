#include "ncftap/subalgebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ncftap {

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks_) {
    os << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  residual=" << c.residual
       << "  threshold=" << c.threshold << "\n";
  }
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

Subalgebra Subalgebra::span_identity(const AlgebraPtr& algebra) {
  // tau(I) = 1, so I itself is a unit vector.
  return Subalgebra(algebra, {AlgebraElement::identity(algebra)});
}

Subalgebra Subalgebra::full(const AlgebraPtr& algebra) {
  std::vector<AlgebraElement> basis;
  const auto& dims = algebra->block_dims();
  const auto& w = algebra->trace_weights();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    double scale = 1.0 / std::sqrt(w[k]);
    for (int i = 0; i < dims[k]; ++i)
      for (int j = 0; j < dims[k]; ++j) {
        AlgebraElement e = AlgebraElement::zero(algebra);
        std::vector<Matrix> blocks = e.blocks();
        blocks[k](i, j) = Complex(scale, 0.0);
        basis.emplace_back(algebra, std::move(blocks));
      }
  }
  return Subalgebra(algebra, std::move(basis));
}

Subalgebra Subalgebra::from_orthonormal_basis(const AlgebraPtr& algebra,
                                              std::vector<AlgebraElement> basis,
                                              double tol) {
  Subalgebra sub(algebra, std::move(basis));
  ValidationReport report = sub.validate(tol);
  if (!report.pass()) {
    const CheckResult* f = report.first_failure();
    throw std::invalid_argument("not a valid subalgebra basis: " + f->name +
                                " residual " + std::to_string(f->residual));
  }
  return sub;
}

Subalgebra Subalgebra::from_orthonormal_basis_unchecked(const AlgebraPtr& algebra,
                                                        std::vector<AlgebraElement> basis) {
  return Subalgebra(algebra, std::move(basis));
}

AlgebraElement Subalgebra::project(const AlgebraElement& x) const {
  ensure_same_algebra(x, basis_.front());
  AlgebraElement p = AlgebraElement::zero(algebra_);
  for (const AlgebraElement& b : basis_) p += gns_inner(b, x) * b;
  return p;
}

double Subalgebra::span_residual(const AlgebraElement& x) const {
  return gns_norm(x - project(x));
}

ValidationReport Subalgebra::validate(double tol) const {
  ValidationReport report;
  if (basis_.empty()) {
    report.add_flag("nonempty basis", false);
    return report;
  }
  double gram = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      Complex g = gns_inner(basis_[i], basis_[j]);
      gram = std::max(gram, std::abs(g - (i == j ? Complex(1.0) : Complex(0.0))));
    }
  report.add("gram orthonormality", gram, tol);
  report.add("identity membership", span_residual(AlgebraElement::identity(algebra_)), tol);
  double adj = 0.0, prod = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    adj = std::max(adj, span_residual(basis_[i].adjoint()));
    for (std::size_t j = 0; j < basis_.size(); ++j)
      prod = std::max(prod, span_residual(basis_[i] * basis_[j]));
  }
  report.add("adjoint closure", adj, tol);
  report.add("product closure", prod, tol);
  return report;
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass.  Returns false
// (and leaves the basis untouched) when the candidate is within rank
// tolerance of the current span.
bool orthonormal_add(std::vector<AlgebraElement>& basis, const AlgebraElement& x) {
  AlgebraElement v = x;
  double pre = gns_norm(v);
  for (int pass = 0; pass < 2; ++pass)
    for (const AlgebraElement& b : basis) v -= gns_inner(b, v) * b;
  double post = gns_norm(v);
  if (post <= kRankTol * (pre + 1.0)) return false;
  v *= Complex(1.0 / post, 0.0);
  basis.push_back(std::move(v));
  return true;
}

}  // namespace

Subalgebra make_subalgebra(const AlgebraPtr& algebra,
                           std::span<const AlgebraElement> generators) {
  std::vector<AlgebraElement> basis;
  basis.push_back(AlgebraElement::identity(algebra));
  for (const AlgebraElement& g : generators) {
    ensure_same_algebra(g, basis.front());
    orthonormal_add(basis, g);
  }
  const int max_dim = algebra->element_dim();
  bool grew = true;
  while (grew && static_cast<int>(basis.size()) < max_dim) {
    grew = false;
    const std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i)
      if (orthonormal_add(basis, basis[i].adjoint())) grew = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (orthonormal_add(basis, basis[i] * basis[j])) grew = true;
  }
  return Subalgebra(algebra, std::move(basis));
}

AlgebraElement conditional_expectation(const AlgebraElement& x, const Subalgebra& sub) {
  return sub.project(x);
}

std::optional<int> Filtration::index_of_time(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-9 * (1.0 + std::abs(t))) return static_cast<int>(k);
  return std::nullopt;
}

ValidationReport validate_filtration(const Filtration& f, double tol) {
  ValidationReport report;
  report.add_flag("level count matches time count", f.times.size() == f.levels.size());
  if (f.times.empty() || f.levels.empty()) return report;
  report.add("t_0 = 0", std::abs(f.times.front()), tol);
  bool increasing = true;
  for (std::size_t k = 0; k + 1 < f.times.size(); ++k)
    if (!(f.times[k] < f.times[k + 1])) increasing = false;
  report.add_flag("times strictly increasing", increasing);

  report.add_flag("level 0 is span{I}", f.levels.front().dim() == 1);
  report.add("level 0 identity residual",
             f.levels.front().span_residual(AlgebraElement::identity(f.algebra())), tol);

  for (std::size_t k = 0; k < f.levels.size(); ++k) {
    ValidationReport sub = f.levels[k].validate(tol);
    report.merge(sub, "level " + std::to_string(k) + ": ");
  }
  for (std::size_t k = 0; k + 1 < f.levels.size(); ++k) {
    double incl = 0.0;
    for (const AlgebraElement& b : f.levels[k].basis())
      incl = std::max(incl, f.levels[k + 1].span_residual(b));
    report.add("inclusion level " + std::to_string(k) + " in level " + std::to_string(k + 1),
               incl, tol);
  }
  return report;
}

}  // namespace ncftap
