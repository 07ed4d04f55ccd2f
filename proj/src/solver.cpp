// CSR matrix, ILUT factorization and right preconditioned GMRes.

#include <dfm/solver.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dfm
{

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const
{
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
  return y;
}

double CsrMatrix::coeff(int i, int j) const
{
  const auto first = col.begin() + row_ptr[i];
  const auto last = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[it - col.begin()];
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) d(i, col[k]) += val[k];
  return d;
}

CsrMatrix csr_from_triplets(int n, const std::vector<Triplet>& triplets)
{
  CsrMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  for (const auto& t : triplets) A.row_ptr[t.row + 1]++;
  for (int i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];

  std::vector<int> cols(triplets.size());
  std::vector<double> vals(triplets.size());
  std::vector<int> cursor(A.row_ptr.begin(), A.row_ptr.end() - 1);
  for (const auto& t : triplets) {
    const int k = cursor[t.row]++;
    cols[k] = t.col;
    vals[k] = t.value;
  }

  // sort each row and merge duplicates
  A.col.reserve(triplets.size());
  A.val.reserve(triplets.size());
  std::vector<int> new_ptr(n + 1, 0);
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) row.emplace_back(cols[k], vals[k]);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t k = 0; k < row.size(); ++k) {
      if (!A.col.empty() && static_cast<int>(A.col.size()) > new_ptr[i] &&
          A.col.back() == row[k].first)
        A.val.back() += row[k].second;
      else {
        A.col.push_back(row[k].first);
        A.val.push_back(row[k].second);
      }
    }
    new_ptr[i + 1] = static_cast<int>(A.col.size());
  }
  A.row_ptr = std::move(new_ptr);
  return A;
}

void IlutFactors::solve_in_place(Eigen::VectorXd& x) const
{
  const int n = L.n;
  // forward: L y = x, unit diagonal
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = L.row_ptr[i]; k < L.row_ptr[i + 1]; ++k) s -= L.val[k] * x[L.col[k]];
    x[i] = s;
  }
  // backward: U z = y; the diagonal is the last entry of each U row
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    double diag = 0.0;
    for (int k = U.row_ptr[i]; k < U.row_ptr[i + 1]; ++k) {
      if (U.col[k] == i)
        diag = U.val[k];
      else
        s -= U.val[k] * x[U.col[k]];
    }
    x[i] = s / diag;
  }
}

IlutFactors ilut_factor(const CsrMatrix& A, double tau)
{
  const int n = A.n;
  IlutFactors F;
  F.L.n = F.U.n = n;
  F.L.row_ptr.assign(1, 0);
  F.U.row_ptr.assign(1, 0);

  std::vector<double> w(n, 0.0);   // dense work row
  std::vector<char> present(n, 0); // nonzero pattern of w
  std::vector<int> upper;          // touched indices >= i
  std::vector<int> u_diag_pos(n);  // position of the diagonal in U storage

  for (int i = 0; i < n; ++i) {
    upper.clear();
    std::set<int> lower; // pending elimination indices, ascending
    double norm2 = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      const int j = A.col[k];
      const double v = A.val[k];
      norm2 += v * v;
      w[j] = v;
      present[j] = 1;
      if (j < i)
        lower.insert(j);
      else
        upper.push_back(j);
    }
    const double drop = tau * std::sqrt(norm2);

    while (!lower.empty()) {
      const int k = *lower.begin();
      lower.erase(lower.begin());
      double wk = w[k] / F.U.val[u_diag_pos[k]];
      if (std::abs(wk) < drop) {
        w[k] = 0.0;
        continue;
      }
      w[k] = wk;
      // subtract wk times row k of U (strictly upper part)
      for (int p = F.U.row_ptr[k]; p < F.U.row_ptr[k + 1]; ++p) {
        const int j = F.U.col[p];
        if (j == k) continue;
        if (!present[j]) {
          present[j] = 1;
          w[j] = 0.0;
          if (j < i)
            lower.insert(j);
          else
            upper.push_back(j);
        }
        w[j] -= wk * F.U.val[p];
      }
    }

    // store L part (kept entries are the processed lower indices)
    for (int j = 0; j < i; ++j) {
      if (!present[j]) continue;
      if (w[j] != 0.0) {
        F.L.col.push_back(j);
        F.L.val.push_back(w[j]);
      }
      present[j] = 0;
      w[j] = 0.0;
    }
    F.L.row_ptr.push_back(static_cast<int>(F.L.col.size()));

    // store U part, dropping small entries but never the diagonal
    std::sort(upper.begin(), upper.end());
    if (!present[i]) throw std::runtime_error("ilut: zero pivot (structurally missing diagonal)");
    for (int j : upper) {
      if (j == i || std::abs(w[j]) >= drop) {
        if (j == i) {
          if (w[j] == 0.0) throw std::runtime_error("ilut: zero pivot");
          u_diag_pos[i] = static_cast<int>(F.U.col.size());
        }
        F.U.col.push_back(j);
        F.U.val.push_back(w[j]);
      }
      present[j] = 0;
      w[j] = 0.0;
    }
    F.U.row_ptr.push_back(static_cast<int>(F.U.col.size()));
  }
  return F;
}

SolveReport gmres_solve(const CsrMatrix& A, const IlutFactors& P, const Eigen::VectorXd& b,
                        Eigen::VectorXd& x, double rtol, int max_iter)
{
  using Eigen::VectorXd;
  SolveReport rep;
  const int n = A.n;
  if (x.size() != n) x = VectorXd::Zero(n);

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    rep.converged = true;
    return rep;
  }

  VectorXd r = b - A.multiply(x);
  double beta = r.norm();
  if (beta / bnorm <= rtol) {
    rep.true_residual = beta / bnorm;
    rep.converged = true;
    return rep;
  }

  std::vector<VectorXd> V;
  V.reserve(64);
  V.push_back(r / beta);
  std::vector<std::vector<double>> Hcols; // column j holds H(0..j+1, j)
  std::vector<double> gc, gs;             // Givens rotations
  std::vector<double> g = {beta};         // rotated rhs

  auto form_solution = [&](int m) {
    // back substitution in the rotated Hessenberg system
    Eigen::VectorXd y(m);
    for (int i = m - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < m; ++j) s -= Hcols[j][i] * y[j];
      y[i] = s / Hcols[i][i];
    }
    VectorXd z = VectorXd::Zero(n);
    for (int j = 0; j < m; ++j) z += y[j] * V[j];
    P.solve_in_place(z);
    return VectorXd(x + z);
  };

  for (int j = 0; j < max_iter; ++j) {
    VectorXd t = V[j];
    P.solve_in_place(t);
    VectorXd wv = A.multiply(t);

    // modified Gram-Schmidt with one conditional re-orthogonalization
    std::vector<double> h(j + 2, 0.0);
    const double w0 = wv.norm();
    for (int i = 0; i <= j; ++i) {
      const double hij = V[i].dot(wv);
      h[i] = hij;
      wv -= hij * V[i];
    }
    if (wv.norm() < 0.5 * w0) {
      for (int i = 0; i <= j; ++i) {
        const double corr = V[i].dot(wv);
        h[i] += corr;
        wv -= corr * V[i];
      }
    }
    const double hnext = wv.norm();
    h[j + 1] = hnext;

    // apply accumulated rotations, then a new one to annihilate h[j+1]
    for (int i = 0; i < j; ++i) {
      const double tmp = gc[i] * h[i] + gs[i] * h[i + 1];
      h[i + 1] = -gs[i] * h[i] + gc[i] * h[i + 1];
      h[i] = tmp;
    }
    const double denom = std::hypot(h[j], h[j + 1]);
    if (denom == 0.0) throw std::runtime_error("gmres: breakdown");
    const double cj = h[j] / denom;
    const double sj = h[j + 1] / denom;
    gc.push_back(cj);
    gs.push_back(sj);
    h[j] = denom;
    h[j + 1] = 0.0;
    g.push_back(-sj * g[j]);
    g[j] = cj * g[j];
    Hcols.push_back(h);
    rep.iterations = j + 1;

    const double est = std::abs(g[j + 1]) / bnorm;
    if (est <= rtol || hnext == 0.0) {
      const VectorXd cand = form_solution(j + 1);
      const double true_res = (b - A.multiply(cand)).norm() / bnorm;
      if (true_res <= rtol || hnext == 0.0) {
        x = cand;
        rep.true_residual = true_res;
        rep.converged = true_res <= rtol;
        return rep;
      }
    }
    if (hnext == 0.0) break;
    if (j + 1 < max_iter) V.push_back(wv / hnext);
  }

  x = form_solution(rep.iterations);
  rep.true_residual = (b - A.multiply(x)).norm() / bnorm;
  rep.converged = rep.true_residual <= rtol;
  return rep;
}

} // namespace dfm
