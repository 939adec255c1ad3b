#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chemfront {

/// Thomas factorization of a tridiagonal matrix, reusable across many
/// right-hand sides (the per-axis diffusion matrices are shared by every
/// grid line along that axis).
class TridiagFactor {
  public:
    TridiagFactor() = default;

    // sub[0] and sup[n-1] are ignored.
    TridiagFactor(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup)
        : sub_(std::move(sub)), diag_(std::move(diag)), sup_(std::move(sup)) {
        const std::size_t n = diag_.size();
        if (n < 2 || sub_.size() != n || sup_.size() != n)
            throw std::invalid_argument("TridiagFactor: inconsistent sizes");
        cp_.resize(n);
        inv_.resize(n);
        double beta = diag_[0];
        if (beta == 0.0) throw std::runtime_error("TridiagFactor: zero pivot");
        inv_[0] = 1.0 / beta;
        cp_[0] = sup_[0] * inv_[0];
        for (std::size_t i = 1; i < n; ++i) {
            beta = diag_[i] - sub_[i] * cp_[i - 1];
            if (beta == 0.0) throw std::runtime_error("TridiagFactor: zero pivot");
            inv_[i] = 1.0 / beta;
            cp_[i] = sup_[i] * inv_[i];
        }
    }

    std::size_t size() const { return diag_.size(); }

    // In-place solve with stride access into x.
    void solve(double* x, std::size_t stride) const {
        const std::size_t n = diag_.size();
        x[0] *= inv_[0];
        for (std::size_t i = 1; i < n; ++i)
            x[i * stride] = (x[i * stride] - sub_[i] * x[(i - 1) * stride]) * inv_[i];
        for (std::size_t i = n - 1; i-- > 0;) x[i * stride] -= cp_[i] * x[(i + 1) * stride];
    }

  private:
    std::vector<double> sub_, diag_, sup_, cp_, inv_;
};

/// Cyclic (periodic) tridiagonal solver via the Sherman-Morrison correction.
/// corner_top is the coefficient of x[n-1] in row 0, corner_bottom that of
/// x[0] in row n-1.
class CyclicTridiagFactor {
  public:
    CyclicTridiagFactor() = default;

    CyclicTridiagFactor(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                        double corner_top, double corner_bottom)
        : top_(corner_top), gamma_(-diag[0]) {
        const std::size_t n = diag.size();
        if (n < 3) throw std::invalid_argument("CyclicTridiagFactor: need n >= 3");
        std::vector<double> d = diag;
        d[0] -= gamma_;
        d[n - 1] -= corner_top * corner_bottom / gamma_;
        core_ = TridiagFactor(std::move(sub), std::move(d), std::move(sup));
        // rank-one correction A = T + u v^T with u = (gamma, 0, .., corner_bottom)
        // and v = (1, 0, .., corner_top/gamma)
        z_.assign(n, 0.0);
        z_[0] = gamma_;
        z_[n - 1] = corner_bottom;
        core_.solve(z_.data(), 1);
        denom_ = 1.0 + z_[0] + top_ * z_[n - 1] / gamma_;
        if (denom_ == 0.0) throw std::runtime_error("CyclicTridiagFactor: singular correction");
    }

    std::size_t size() const { return core_.size(); }

    void solve(double* x, std::size_t stride) const {
        const std::size_t n = core_.size();
        core_.solve(x, stride);
        const double fact = (x[0] + top_ * x[(n - 1) * stride] / gamma_) / denom_;
        for (std::size_t i = 0; i < n; ++i) x[i * stride] -= fact * z_[i];
    }

  private:
    TridiagFactor core_;
    std::vector<double> z_;
    double top_ = 0.0;
    double gamma_ = 0.0;
    double denom_ = 1.0;
};

}  // namespace chemfront
