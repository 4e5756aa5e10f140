#include "mgarch/asymptotics.hpp"

namespace mgarch {

JacobianState jacobian_state(const MomentSet& ms, const ToleranceConfig& tol) {
  EstimateOptions opts;
  opts.tol = tol;
  const EstimateReport rep = estimate(ms, opts);
  JacobianState js;
  js.h = ms.h;
  js.M0 = ms.M0;
  js.M1 = ms.M1;
  js.M2 = ms.M2;
  js.phi = rep.phi;
  js.gamma0 = rep.gammas.gamma0;
  js.gamma1 = rep.gammas.gamma1;
  js.B = rep.spec.B;
  js.sigma = rep.sigma;
  return js;
}

ParameterPerturbation jacobian_action(const JacobianState& js, const MomentPerturbation& dm,
                                      const ToleranceConfig& tol) {
  const Index n = js.dbar();
  if (dm.dh.size() != n || dm.dM0.rows() != n || dm.dM0.cols() != n || dm.dM1.rows() != n ||
      dm.dM1.cols() != n || dm.dM2.rows() != n || dm.dM2.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "jacobian_action: perturbation shapes must match dbar");
  }
  const Matrix& phi = js.phi;
  const Matrix I = Matrix::Identity(n, n);
  ParameterPerturbation out;

  // X M1^{-1} computed as (M1^{-T} X^T)^T.
  const auto right_div_m1 = [&](const Matrix& x) -> Matrix {
    return solve(js.M1.transpose(), x.transpose(), tol).transpose();
  };
  out.dPhi = right_div_m1(dm.dM2 - phi * dm.dM1);

  out.dGamma1 = dm.dM1 - out.dPhi * js.M0 - phi * dm.dM0;
  const Matrix g0 = dm.dM0 - dm.dM1 * phi.transpose() - js.M1 * out.dPhi.transpose() - out.dPhi * js.M1.transpose() -
                    phi * dm.dM1.transpose() + out.dPhi * js.M0 * phi.transpose() + phi * dm.dM0 * phi.transpose() +
                    phi * js.M0 * out.dPhi.transpose();
  out.dGamma0 = symmetrize(g0);

  const Matrix q = out.dGamma0 + out.dGamma1 * js.B.transpose() + js.B * out.dGamma1.transpose();
  out.dSigma = dlyap(js.B, q, tol);

  // dB = -(dG1 + B dSigma) Sigma^{-1}
  out.dB = -solve(js.sigma.transpose(), (out.dGamma1 + js.B * out.dSigma).transpose(), tol).transpose();
  out.dA = out.dPhi - out.dB;
  out.dc = -out.dPhi * js.h + (I - phi) * dm.dh;
  return out;
}

MomentPerturbation unpack_moments(const Vector& v, Index dbar) {
  const Index sq = dbar * dbar;
  if (v.size() != dbar + 3 * sq) throw Error(ErrorCode::InvalidInput, "unpack_moments: wrong length");
  MomentPerturbation dm;
  dm.dh = v.head(dbar);
  dm.dM0 = unvec(v.segment(dbar, sq), dbar, dbar);
  dm.dM1 = unvec(v.segment(dbar + sq, sq), dbar, dbar);
  dm.dM2 = unvec(v.segment(dbar + 2 * sq, sq), dbar, dbar);
  return dm;
}

Vector parameter_vector(const GarchSpec& spec) {
  const Index n = spec.dbar();
  Vector out(n + 2 * n * n);
  out << spec.c, vec(spec.A), vec(spec.B);
  return out;
}

std::vector<std::string> parameter_names(Index dbar) {
  std::vector<std::string> names;
  for (Index i = 0; i < dbar; ++i) names.push_back("c[" + std::to_string(i) + "]");
  for (const char* m : {"A", "B"}) {
    for (Index j = 0; j < dbar; ++j)
      for (Index i = 0; i < dbar; ++i)
        names.push_back(std::string(m) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return names;
}

Matrix jacobian_matrix(const JacobianState& js, const ToleranceConfig& tol) {
  const Index n = js.dbar();
  const Index cols = n + 3 * n * n;
  Matrix jac(n + 2 * n * n, cols);
  Vector e = Vector::Zero(cols);
  for (Index k = 0; k < cols; ++k) {
    e.setZero();
    e(k) = 1.0;
    const ParameterPerturbation dp = jacobian_action(js, unpack_moments(e, n), tol);
    jac.col(k) << dp.dc, vec(dp.dA), vec(dp.dB);
  }
  return jac;
}

AsymptoticReport xi(const Matrix& jacobian, const PsiEstimate& psi, Index n) {
  if (jacobian.cols() != psi.matrix.rows() || psi.matrix.rows() != psi.matrix.cols()) {
    throw Error(ErrorCode::InvalidInput, "xi: Jacobian columns must match the dimension of Psi");
  }
  if (n < 1) throw Error(ErrorCode::InvalidInput, "xi: sample size must be positive");
  AsymptoticReport rep;
  rep.jacobian = jacobian;
  rep.xi = jacobian * psi.matrix * jacobian.transpose();
  rep.xi_clipped = clip_psd(rep.xi);
  rep.std_errors = (rep.xi.diagonal().cwiseMax(0.0) / static_cast<double>(n)).cwiseSqrt();
  rep.psi_method = psi.method;
  rep.psi_clipped = psi.clipped;
  rep.n = n;
  return rep;
}

}  // namespace mgarch
