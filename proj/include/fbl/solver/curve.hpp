#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "fbl/errors.hpp"

namespace fbl {

// Interface height function y = h(x) sampled at N uniform x nodes on
// [0, 2*pi), periodic. h' and h'' are kept in sync by periodic central
// differences after every update, so the whole scheme stays second order
// and local. The curve must stay strictly inside the strip: subdomain
// collapse is detected with the margin eps = 1e-3 * L.
class InterfaceCurve {
  public:
    InterfaceCurve(Eigen::ArrayXd heights, double domain_height)
        : h_(std::move(heights)), L_(domain_height) {
        check_interior();
        recompute_derivatives();
    }

    static InterfaceCurve flat(int n, double height, double domain_height) {
        return InterfaceCurve(Eigen::ArrayXd::Constant(n, height), domain_height);
    }

    int size() const { return static_cast<int>(h_.size()); }
    double dx() const { return 2.0 * std::numbers::pi / size(); }
    double x(int i) const { return i * dx(); }
    double domain_height() const { return L_; }
    double collapse_margin() const { return 1e-3 * L_; }

    const Eigen::ArrayXd& h() const { return h_; }
    const Eigen::ArrayXd& hp() const { return hp_; }
    const Eigen::ArrayXd& hpp() const { return hpp_; }

    // h <- h + dt * r (vertical realization of the normal velocity).
    void advance(const Eigen::ArrayXd& r, double dt) {
        if (!r.isFinite().all()) throw MappingSingularError("non-finite interface velocity");
        h_ += dt * r;
        check_interior();
        recompute_derivatives();
    }

  private:
    void check_interior() const {
        const double eps = collapse_margin();
        if ((h_ <= eps).any() || (h_ >= L_ - eps).any())
            throw MappingSingularError("interface left the strip (subdomain collapse)");
    }

    void recompute_derivatives() {
        const int n = size();
        const double dx = this->dx();
        hp_.resize(n);
        hpp_.resize(n);
        for (int i = 0; i < n; ++i) {
            int ip = (i + 1) % n, im = (i + n - 1) % n;
            hp_[i] = (h_[ip] - h_[im]) / (2.0 * dx);
            hpp_[i] = (h_[ip] - 2.0 * h_[i] + h_[im]) / (dx * dx);
        }
    }

    Eigen::ArrayXd h_, hp_, hpp_;
    double L_;
};

}  // namespace fbl
