#include "dtqmc/queue_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtqmc {

QueueDims::QueueDims(int di, int do_, int dq) : d_i(di), d_o(do_), d_q(dq) {
  if (d_i < 2 || d_o < 2 || d_q < 2) {
    throw InvalidDimsError("QueueDims: register dimensions must be >= 2");
  }
  if (d_q < d_i + d_o - 1) {
    throw InvalidDimsError(
        "QueueDims: need d_q >= d_i + d_o - 1 so the barrier regimes "
        "partition the queue basis (got d_q=" + std::to_string(d_q) + ")");
  }
}

ComplexMatrix hadamard_matrix() {
  ComplexMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

ComplexMatrix walsh_hadamard_matrix(int n) {
  if (n < 1) throw InvalidDimsError("walsh_hadamard: n must be >= 1");
  ComplexMatrix h = hadamard_matrix();
  ComplexMatrix out = h;
  for (int i = 1; i < n; ++i) out = kron(out, h);
  return out;
}

ComplexMatrix grover_matrix(int d) {
  if (d < 2) throw InvalidDimsError("grover: d must be >= 2");
  const double off = 2.0 / d;
  ComplexMatrix g = ComplexMatrix::Constant(d, d, Complex(off, 0.0));
  for (Index i = 0; i < d; ++i) g(i, i) = off - 1.0;
  return g;
}

ComplexMatrix dft_matrix(int d) {
  if (d < 2) throw InvalidDimsError("dft: d must be >= 2");
  ComplexMatrix f(d, d);
  const double s = 1.0 / std::sqrt(double(d));
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      const double ang = 2.0 * std::numbers::pi * double(j) * double(k) / d;
      f(j, k) = s * Complex(std::cos(ang), std::sin(ang));
    }
  }
  return f;
}

namespace {

void check_unitary(const ComplexMatrix& u, const std::string& what) {
  if (u.rows() != u.cols()) {
    throw InvalidDimsError(what + ": matrix must be square");
  }
  const double err =
      max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (err > 1e-10) {
    throw InvalidValueError(what + ": not unitary, |U^t U - 1| = " +
                            std::to_string(err));
  }
}

}  // namespace

CoinSpec CoinSpec::hadamard() {
  CoinSpec c(CoinKind::kHadamard, CoinApplication::kPerRegister);
  c.unitary_ = hadamard_matrix();
  return c;
}

CoinSpec CoinSpec::walsh_hadamard(int n) {
  CoinSpec c(CoinKind::kWalshHadamard, CoinApplication::kPerRegister);
  c.param_ = n;
  c.unitary_ = walsh_hadamard_matrix(n);
  return c;
}

CoinSpec CoinSpec::grover(int d) {
  CoinSpec c(CoinKind::kGrover, CoinApplication::kPerRegister);
  c.param_ = d;
  c.unitary_ = grover_matrix(d);
  return c;
}

CoinSpec CoinSpec::dft(int d) {
  CoinSpec c(CoinKind::kDft, CoinApplication::kPerRegister);
  c.param_ = d;
  c.unitary_ = dft_matrix(d);
  return c;
}

CoinSpec CoinSpec::identity(int d) {
  if (d < 2) throw InvalidDimsError("identity coin: d must be >= 2");
  CoinSpec c(CoinKind::kCustomUnitary, CoinApplication::kPerRegister);
  c.unitary_ = ComplexMatrix::Identity(d, d);
  return c;
}

CoinSpec CoinSpec::custom_unitary(ComplexMatrix u, CoinApplication app) {
  check_unitary(u, "custom_unitary");
  if (!is_finite(u)) throw InvalidValueError("custom_unitary: non-finite entries");
  CoinSpec c(CoinKind::kCustomUnitary, app);
  c.unitary_ = std::move(u);
  return c;
}

CoinSpec CoinSpec::custom_kraus(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) throw InvalidValueError("custom_kraus: empty Kraus set");
  CoinSpec c(CoinKind::kCustomKraus, CoinApplication::kJoint);
  c.kraus_ = std::move(ops);
  // Completeness is validated when the channel is built.
  return c;
}

const ComplexMatrix& CoinSpec::unitary() const {
  if (kind_ == CoinKind::kCustomKraus) {
    throw InvalidValueError("CoinSpec: Kraus coin has no single unitary");
  }
  return unitary_;
}

std::vector<ComplexMatrix> CoinSpec::coin_space_kraus(const QueueDims& dims) const {
  if (kind_ == CoinKind::kCustomKraus) {
    for (const auto& k : kraus_) {
      if (k.rows() != dims.coin_dim() || k.cols() != dims.coin_dim()) {
        throw InvalidDimsError("CoinSpec: Kraus coin must act on dimension d_i*d_o");
      }
    }
    return kraus_;
  }
  if (application_ == CoinApplication::kJoint) {
    if (unitary_.rows() != dims.coin_dim()) {
      throw InvalidDimsError("CoinSpec: joint coin dimension " +
                             std::to_string(unitary_.rows()) +
                             " != d_i*d_o = " + std::to_string(dims.coin_dim()));
    }
    return {unitary_};
  }
  // Per register: the same unitary on I and O.
  if (unitary_.rows() != dims.d_i || unitary_.rows() != dims.d_o) {
    throw InvalidDimsError("CoinSpec: per-register coin dimension " +
                           std::to_string(unitary_.rows()) + " does not match d_i=" +
                           std::to_string(dims.d_i) + ", d_o=" +
                           std::to_string(dims.d_o));
  }
  return {kron(unitary_, unitary_)};
}

Index CoinSpec::reduction_dim(const QueueDims& dims) const {
  if (kind_ != CoinKind::kCustomKraus &&
      application_ == CoinApplication::kPerRegister) {
    return unitary_.rows();
  }
  return dims.coin_dim();
}

std::vector<ComplexMatrix> CoinSpec::reduction_kraus(const QueueDims& dims) const {
  if (kind_ != CoinKind::kCustomKraus &&
      application_ == CoinApplication::kPerRegister) {
    if (unitary_.rows() != dims.d_i || unitary_.rows() != dims.d_o) {
      throw InvalidDimsError("CoinSpec: per-register coin does not match dims");
    }
    return {unitary_};
  }
  return coin_space_kraus(dims);
}

std::string CoinSpec::name() const {
  switch (kind_) {
    case CoinKind::kHadamard: return "hadamard";
    case CoinKind::kWalshHadamard: return "walsh_hadamard(" + std::to_string(param_) + ")";
    case CoinKind::kGrover: return "grover(" + std::to_string(param_) + ")";
    case CoinKind::kDft: return "dft(" + std::to_string(param_) + ")";
    case CoinKind::kCustomUnitary:
      return application_ == CoinApplication::kJoint ? "custom_unitary(joint)"
                                                     : "custom_unitary(per_register)";
    case CoinKind::kCustomKraus: return "custom_kraus";
  }
  return "unknown";
}

KrausChannel build_queue_channel(const QueueDims& dims) {
  const Index n_tot = dims.total_dim();
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<SparseCMatrix> ops;

  auto make_op = [&](const std::vector<Triplet>& trips) {
    SparseCMatrix k(n_tot, n_tot);
    k.setFromTriplets(trips.begin(), trips.end());
    ops.push_back(std::move(k));
  };

  // Shift operator: no barrier reachable from j in [d_o-1, d_q-d_i].
  {
    std::vector<Triplet> trips;
    for (int n = 0; n < dims.d_i; ++n) {
      for (int m = 0; m < dims.d_o; ++m) {
        for (int j = dims.d_o - 1; j <= dims.d_q - dims.d_i; ++j) {
          const int target = j + n - m;
          if (target < 0 || target >= dims.d_q) {
            throw NumericalError("build_queue_channel: shift target out of range");
          }
          trips.emplace_back(dims.basis_index(n, m, target),
                             dims.basis_index(n, m, j), Complex(1.0, 0.0));
        }
      }
    }
    make_op(trips);
  }
  // Lower-barrier operators, one per l in {0..d_o-2}.
  for (int l = 0; l <= dims.d_o - 2; ++l) {
    std::vector<Triplet> trips;
    for (int n = 0; n < dims.d_i; ++n) {
      for (int m = 0; m < dims.d_o; ++m) {
        const int target = std::max(l + n - m, 0);
        trips.emplace_back(dims.basis_index(n, m, target),
                           dims.basis_index(n, m, l), Complex(1.0, 0.0));
      }
    }
    make_op(trips);
  }
  // Upper-barrier operators, one per u in {d_q-d_i+1..d_q-1}.
  for (int u = dims.d_q - dims.d_i + 1; u <= dims.d_q - 1; ++u) {
    std::vector<Triplet> trips;
    for (int n = 0; n < dims.d_i; ++n) {
      for (int m = 0; m < dims.d_o; ++m) {
        const int target = std::min(u + n - m, dims.d_q - 1);
        trips.emplace_back(dims.basis_index(n, m, target),
                           dims.basis_index(n, m, u), Complex(1.0, 0.0));
      }
    }
    make_op(trips);
  }
  return KrausChannel(n_tot, std::move(ops));
}

KrausChannel build_coin_channel(const CoinSpec& coin, const QueueDims& dims) {
  const SparseCMatrix id_q = sparse_identity(dims.d_q);
  std::vector<SparseCMatrix> ops;
  for (const ComplexMatrix& c : coin.coin_space_kraus(dims)) {
    ops.push_back(kron_sparse(to_sparse(c), id_q));
  }
  return KrausChannel(dims.total_dim(), std::move(ops));
}

KrausChannel build_dephasing_channel(const QueueDims& dims) {
  const Index nc = dims.coin_dim();
  const SparseCMatrix id_q = sparse_identity(dims.d_q);
  std::vector<SparseCMatrix> ops;
  ops.reserve(static_cast<std::size_t>(nc));
  for (Index x = 0; x < nc; ++x) {
    SparseCMatrix proj(nc, nc);
    proj.insert(x, x) = Complex(1.0, 0.0);
    proj.makeCompressed();
    ops.push_back(kron_sparse(proj, id_q));
  }
  return KrausChannel(dims.total_dim(), std::move(ops));
}

KrausChannel build_reset_channel(const QueueDims& dims) {
  const Index nc = dims.coin_dim();
  const SparseCMatrix id_q = sparse_identity(dims.d_q);
  std::vector<SparseCMatrix> ops;
  ops.reserve(static_cast<std::size_t>(nc));
  for (Index x = 0; x < nc; ++x) {
    SparseCMatrix r(nc, nc);
    r.insert(0, x) = Complex(1.0, 0.0);
    r.makeCompressed();
    ops.push_back(kron_sparse(r, id_q));
  }
  return KrausChannel(dims.total_dim(), std::move(ops));
}

KrausChannel build_step_channel(const QueueDims& dims, const CoinSpec& coin,
                                bool classical) {
  const KrausChannel queue = build_queue_channel(dims);
  const KrausChannel coin_ch = build_coin_channel(coin, dims);
  if (!classical) {
    return compose(queue, coin_ch);
  }
  const KrausChannel deph = build_dephasing_channel(dims);
  const KrausChannel reset = build_reset_channel(dims);
  return compose(queue, compose(deph, compose(coin_ch, reset)));
}

}  // namespace dtqmc
