#include "ncgw/opalg.hpp"

#include <cmath>

namespace ncgw {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const int na = int(A.rows()), nb = int(B.rows());
  Eigen::MatrixXcd out(na * nb, na * nb);
  for (int ia = 0; ia < na; ++ia)
    for (int ja = 0; ja < na; ++ja)
      out.block(ia * nb, ja * nb, nb, nb) = A(ia, ja) * B;
  return out;
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& A,
                            const Eigen::MatrixXcd& B) {
  return A * B - B * A;
}

} // namespace

OperatorSet build_canonical_ops(int n_cut, double hbar, double length_scale) {
  if (n_cut < 8 || n_cut % 2 != 0)
    throw ConfigError("build_canonical_ops: n_cut must be even and >= 8");
  if (!(hbar > 0.0) || !(length_scale > 0.0))
    throw ConfigError("build_canonical_ops: hbar and length_scale must be positive");

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_cut, n_cut);
  for (int n = 1; n < n_cut; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd x1 = length_scale / std::sqrt(2.0) * (a + ad);
  const Eigen::MatrixXcd p1 =
      I * hbar / (length_scale * std::sqrt(2.0)) * (ad - a);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_cut, n_cut);

  OperatorSet ops;
  ops.n_cut = n_cut;
  ops.interior = n_cut / 2;
  ops.hbar = hbar;
  ops.length_scale = length_scale;
  ops.x = kron(x1, id);
  ops.y = kron(id, x1);
  ops.px = kron(p1, id);
  ops.py = kron(id, p1);
  ops.interior_idx.reserve(ops.interior * ops.interior);
  for (int ix = 0; ix < ops.interior; ++ix)
    for (int iy = 0; iy < ops.interior; ++iy)
      ops.interior_idx.push_back(ix * n_cut + iy);
  return ops;
}

Eigen::MatrixXcd interior_block(const Eigen::MatrixXcd& full,
                                const OperatorSet& ops) {
  const auto& idx = ops.interior_idx;
  const int d = int(idx.size());
  Eigen::MatrixXcd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = full(idx[i], idx[j]);
  return out;
}

Eigen::MatrixXcd compose_hamiltonian(const OperatorSet& ops,
                                     const PhysicalParams& p) {
  p.validate();
  const int n = ops.n_cut;
  // recover the per-mode pieces instead of multiplying dim^2 matrices
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd x1 = ops.length_scale / std::sqrt(2.0) * (a + ad);
  const Eigen::MatrixXcd p1 =
      I * ops.hbar / (ops.length_scale * std::sqrt(2.0)) * (ad - a);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

  const Eigen::MatrixXcd kin = (p1 * p1) / (2.0 * p.m);
  const Eigen::MatrixXcd conf =
      p.eta * p.eta / (8.0 * p.m * p.hbar * p.hbar) * (x1 * x1);
  const Eigen::MatrixXcd hx = kin + conf + p.m * p.g * x1;
  const Eigen::MatrixXcd hy = kin + conf;
  const double rot = p.eta / (2.0 * p.m * p.hbar);
  const double shift = p.m * p.g * p.theta / (2.0 * p.hbar);

  Eigen::MatrixXcd H = kron(hx, id);
  H += kron(id, hy);
  H += rot * (kron(p1, x1) - kron(x1, p1));
  H -= shift * kron(id, p1);
  return H;
}

SpanFit fit_in_span(const Eigen::MatrixXcd& target_interior,
                    const OperatorSet& ops) {
  const Eigen::MatrixXcd basis[5] = {
      interior_block(ops.x, ops), interior_block(ops.y, ops),
      interior_block(ops.px, ops), interior_block(ops.py, ops),
      Eigen::MatrixXcd::Identity(target_interior.rows(),
                                 target_interior.cols())};
  Eigen::Matrix<cplx, 5, 5> gram;
  Eigen::Vector<cplx, 5> rhs;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j)
      gram(i, j) = (basis[i].adjoint() * basis[j]).trace();
    rhs[i] = (basis[i].adjoint() * target_interior).trace();
  }
  SpanFit fit;
  fit.coeff = gram.fullPivLu().solve(rhs);
  Eigen::MatrixXcd resid = target_interior;
  for (int i = 0; i < 5; ++i) resid -= fit.coeff[i] * basis[i];
  const double tnorm = target_interior.norm();
  fit.residual = tnorm > 0.0 ? resid.norm() / tnorm : resid.norm();
  return fit;
}

AlgebraReport verify_quasi_algebra(const OperatorSet& ops,
                                   const PhysicalParams& p, double tol) {
  p.validate();
  const Eigen::MatrixXcd H = compose_hamiltonian(ops, p);
  const double m = p.m, g = p.g, hb = p.hbar, th = p.theta, et = p.eta;
  const cplx z = I; // commutator coefficients are purely imaginary here

  struct Spec {
    const char* name;
    const Eigen::MatrixXcd* gen;
    cplx formula[5]; // coefficients on (x, y, px, py, 1)
    cplx oracle[5];
  };
  const cplx e2 = z * et / (2.0 * m);
  const cplx e4 = z * et * et / (4.0 * m * hb);
  std::vector<Spec> specs = {
      {"[H,x]", &ops.x,
       {0, -e2, -z * hb / m, 0, 0},
       {0, -e2, -z * hb / m, 0, 0}},
      {"[H,y]", &ops.y,
       {e2, 0, 0, -z * hb / m, z * m * g * th / 2.0},
       {e2, 0, 0, -z * hb / m, z * m * g * th / 2.0}},
      {"[H,px]", &ops.px,
       {e4, 0, -e2, 0, z * m * g * hb},
       {e4, 0, 0, -e2, z * m * g * hb}},
      {"[H,py]", &ops.py,
       {0, e4, e2, 0, 0},
       {0, e4, e2, 0, 0}},
  };
  const char* channel_names[5] = {"x", "y", "px", "py", "1"};

  AlgebraReport rep;
  rep.tol = tol;
  rep.all_close = true;
  rep.formula_mismatches = 0;
  for (const auto& s : specs) {
    const Eigen::MatrixXcd K = interior_block(commutator(H, *s.gen), ops);
    const SpanFit fit = fit_in_span(K, ops);
    AlgebraRelation rel;
    rel.relation = s.name;
    rel.fit_residual = fit.residual;
    rel.closes = fit.residual < tol;
    double scale = 1.0;
    for (int c = 0; c < 5; ++c) scale = std::max(scale, std::abs(s.oracle[c]));
    rel.matches_oracle = true;
    rel.matches_formula = true;
    for (int c = 0; c < 5; ++c) {
      AlgebraChannel ch;
      ch.name = channel_names[c];
      ch.formula = s.formula[c];
      ch.oracle = s.oracle[c];
      ch.measured = fit.coeff[c];
      if (std::abs(ch.measured - ch.oracle) / scale > tol)
        rel.matches_oracle = false;
      if (std::abs(ch.measured - ch.formula) / scale > tol) {
        rel.matches_formula = false;
        ++rep.formula_mismatches;
      }
      rel.channels.push_back(ch);
    }
    rep.all_close = rep.all_close && rel.closes && rel.matches_oracle;
    rep.relations.push_back(std::move(rel));
  }
  return rep;
}

Eigen::MatrixXcd build_invariant(const OperatorSet& ops, const CoeffSet& cs,
                                 double t) {
  const auto v = cs.at(t);
  const int dim = int(ops.x.rows());
  Eigen::MatrixXcd out = v[0] * ops.px;
  out += v[1] * ops.py;
  out += v[2] * ops.x;
  out += v[3] * ops.y;
  out += v[4] * Eigen::MatrixXcd::Identity(dim, dim);
  return out;
}

InvarianceChecker::InvarianceChecker(const OperatorSet& ops,
                                     const PhysicalParams& p)
    : hbar_(p.hbar), params_(p) {
  const Eigen::MatrixXcd H = compose_hamiltonian(ops, p);
  const Eigen::MatrixXcd* gens[4] = {&ops.x, &ops.y, &ops.px, &ops.py};
  for (int i = 0; i < 4; ++i) {
    gen_int_[i] = interior_block(*gens[i], ops);
    comm_int_[i] = interior_block((*gens[i]) * H - H * (*gens[i]), ops);
  }
  dim_ = int(gen_int_[0].rows());
}

double InvarianceChecker::residual(const CoeffSet& cs, double t) const {
  const auto v = cs.at(t);
  const auto dv = coeff_rhs(v, params_);
  // generator storage order is (x, y, px, py); coefficients are (A,B,C,D)
  // on (px, py, x, y)
  const int map[4] = {2, 3, 0, 1}; // coeff index for gen_int_[i]
  Eigen::MatrixXcd defect =
      Eigen::MatrixXcd::Zero(dim_, dim_);
  Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int i = 0; i < 4; ++i) {
    defect += dv[map[i]] * gen_int_[i];
    defect += v[map[i]] / (I * hbar_) * comm_int_[i];
    inv += v[map[i]] * gen_int_[i];
  }
  for (int k = 0; k < dim_; ++k) {
    defect(k, k) += dv[4];
    inv(k, k) += v[4];
  }
  return defect.norm() / inv.norm();
}

LadderReport ladder_check(const OperatorSet& ops, const CoeffSet& cs, double t,
                          double tol) {
  const auto v = cs.at(t);
  const Eigen::MatrixXcd J1 = v[0] * ops.px + v[2] * ops.x;
  const Eigen::MatrixXcd J2 = v[1] * ops.py + v[3] * ops.y;
  const Eigen::MatrixXcd J1d = J1.adjoint();
  const Eigen::MatrixXcd J2d = J2.adjoint();
  const auto& p = cs.params;
  const double target = p.m * p.m * p.hbar * p.hbar / p.eta
                        * std::norm(cs.b1);

  LadderReport rep;
  rep.target = target;
  const Eigen::MatrixXcd c11 = interior_block(commutator(J1, J1d), ops);
  const Eigen::MatrixXcd c22 = interior_block(commutator(J2, J2d), ops);
  const Eigen::MatrixXcd c12 = interior_block(commutator(J1, J2d), ops);
  const Eigen::MatrixXcd c21 = interior_block(commutator(J2, J1d), ops);
  const int d = int(c11.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  rep.diag_dev[0] = (c11 - target * id).cwiseAbs().maxCoeff() / target;
  rep.diag_dev[1] = (c22 - target * id).cwiseAbs().maxCoeff() / target;
  rep.cross_dev = std::max(c12.cwiseAbs().maxCoeff(),
                           c21.cwiseAbs().maxCoeff()) / target;

  const Eigen::MatrixXcd inv = build_invariant(ops, cs, t);
  Eigen::MatrixXcd recomposed = J1 + J2;
  const int dim = int(ops.x.rows());
  for (int k = 0; k < dim; ++k) recomposed(k, k) += v[4];
  rep.recompose_dev = interior_block(recomposed - inv, ops).norm()
                      / interior_block(inv, ops).norm();
  rep.pass = rep.diag_dev[0] < tol && rep.diag_dev[1] < tol
             && rep.cross_dev < tol && rep.recompose_dev < tol;
  return rep;
}

} // namespace ncgw
