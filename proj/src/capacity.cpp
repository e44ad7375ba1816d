// SPDX-License-Identifier: Apache-2.0
//
// mamimo - capacity maximization for movable-antenna MIMO links
// Copyright (C) 2026 The mamimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mamimo/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mamimo {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdTol = 1e-9;

ComplexMatrix hermitian_part(const ComplexMatrix &a) { return 0.5 * (a + a.adjoint()); }

CapacityResult eigenmode_result(const SpectralDecomposition &svd, const ComplexMatrix &basis,
                                double power, double noise_power) {
    CapacityResult out;
    out.singular = svd.singular;
    out.allocation = water_fill(svd.singular, power, noise_power);
    out.covariance = hermitian_part(basis * out.allocation.powers.cast<Complex>().asDiagonal() *
                                    basis.adjoint());
    out.capacity = eigenmode_capacity(svd.singular, out.allocation.powers, noise_power);
    return out;
}

} // namespace

SpectralDecomposition truncated_svd(const ComplexMatrix &h, double tol) {
    if (!h.allFinite())
        throw NumericalFailure("channel matrix has non-finite entries");
    if (h.size() == 0)
        throw AllZeroChannel("channel matrix is empty");
    Eigen::JacobiSVD<ComplexMatrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        throw AllZeroChannel();

    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) > tol * s(0))
        ++keep;

    SpectralDecomposition out;
    out.singular = s.head(keep);
    out.left = svd.matrixU().leftCols(keep);
    out.right = svd.matrixV().leftCols(keep);
    return out;
}

WaterFilling water_fill(const RealVector &singular, double power, double noise_power) {
    if (!(power > 0.0) || !(noise_power > 0.0))
        throw ConfigError("water filling needs positive power and noise power");
    const Eigen::Index streams = singular.size();
    if (streams == 0)
        throw AllZeroChannel("no streams to allocate power over");

    // Noise-to-gain floor of each stream; the floors are ascending for descending singulars.
    RealVector floor(streams);
    for (Eigen::Index s = 0; s < streams; ++s) {
        if (!(singular(s) > 0.0))
            throw ConfigError("water filling needs strictly positive singular values");
        if (s > 0 && singular(s) > singular(s - 1))
            throw ConfigError("water filling needs descending singular values");
        floor(s) = noise_power / (singular(s) * singular(s));
    }

    WaterFilling out{RealVector::Zero(streams), 0.0};
    double floor_sum = floor.sum();
    for (Eigen::Index active = streams; active >= 1; --active) {
        const double level = (power + floor_sum) / static_cast<double>(active);
        if (level > floor(active - 1) || active == 1) {
            out.water_level = level;
            for (Eigen::Index s = 0; s < active; ++s)
                out.powers(s) = level - floor(s);
            return out;
        }
        floor_sum -= floor(active - 1);
    }
    return out; // unreachable: active == 1 always accepts
}

double eigenmode_capacity(const RealVector &singular, const RealVector &powers,
                          double noise_power) {
    if (singular.size() != powers.size())
        throw ShapeMismatch("singular values and powers differ in length");
    double bits = 0.0;
    for (Eigen::Index s = 0; s < singular.size(); ++s)
        bits += std::log1p(singular(s) * singular(s) * powers(s) / noise_power);
    return bits / std::numbers::ln2;
}

double capacity_of(const ComplexMatrix &h, const ComplexMatrix &q, double noise_power) {
    if (q.rows() != q.cols() || h.cols() != q.rows())
        throw ShapeMismatch("capacity_of: Q must be N x N for an M x N channel");
    if (!(noise_power > 0.0))
        throw ConfigError("noise power must be positive");
    if (h.size() == 0)
        return 0.0;
    const ComplexMatrix arg = hermitian_part(h * q * h.adjoint()) / noise_power;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(arg, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw NumericalFailure("eigenvalue solver failed in capacity_of");
    double bits = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double e = eig.eigenvalues()(i);
        if (e <= -1.0)
            throw InvalidCovariance("I + HQH^H/sigma^2 is not positive definite");
        bits += std::log1p(e);
    }
    return bits / std::numbers::ln2;
}

CapacityResult optimal_covariance(const ComplexMatrix &h, double power, double noise_power,
                                  double tol) {
    const auto svd = truncated_svd(h, tol);
    return eigenmode_result(svd, svd.right, power, noise_power);
}

CapacityResult receive_side_covariance(const ComplexMatrix &h, double power, double noise_power,
                                       double tol) {
    // H^H = V Λ U^H, so the reverse link's right singular vectors are the columns of U.
    const auto svd = truncated_svd(h, tol);
    return eigenmode_result(svd, svd.left, power, noise_power);
}

double water_filled_capacity(const ComplexMatrix &h, double power, double noise_power,
                             double tol) {
    const ComplexMatrix gram = h.rows() <= h.cols() ? ComplexMatrix(h * h.adjoint())
                                                    : ComplexMatrix(h.adjoint() * h);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const RealVector &ev = eig.eigenvalues(); // ascending
    const Eigen::Index n = ev.size();
    if (n == 0 || !(ev(n - 1) > 0.0))
        throw AllZeroChannel();
    const double cutoff =
        std::max(tol * tol, 64.0 * std::numeric_limits<double>::epsilon()) * ev(n - 1);
    std::vector<double> kept;
    for (Eigen::Index i = n - 1; i >= 0 && ev(i) > cutoff; --i)
        kept.push_back(std::sqrt(ev(i)));
    const RealVector singular = Eigen::Map<const RealVector>(kept.data(),
                                                             static_cast<Eigen::Index>(kept.size()));
    const auto wf = water_fill(singular, power, noise_power);
    return eigenmode_capacity(singular, wf.powers, noise_power);
}

ChannelMetrics metrics_of(const ComplexMatrix &h, double power, double noise_power, double tol) {
    const auto svd = truncated_svd(h, tol);
    const auto result = eigenmode_result(svd, svd.right, power, noise_power);
    ChannelMetrics m;
    m.capacity = result.capacity;
    m.total_power = h.squaredNorm();
    m.strongest_eig_power = svd.singular(0) * svd.singular(0);
    m.condition_number = svd.singular(0) / svd.singular(svd.rank() - 1);
    return m;
}

void check_covariance(const ComplexMatrix &q, double power) {
    if (q.rows() != q.cols())
        throw InvalidCovariance("covariance must be square");
    if (q.size() == 0)
        return;
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
        throw InvalidCovariance("covariance is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(q), Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTol)
        throw InvalidCovariance("covariance is not positive semi-definite");
    if (power > 0.0 && q.trace().real() > power + 1e-9)
        throw InvalidCovariance("covariance trace exceeds the power budget");
}

ComplexMatrix covariance_factor(const ComplexMatrix &q) {
    check_covariance(q);
    if (q.size() == 0)
        return q;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(q));
    if (eig.info() != Eigen::Success)
        throw NumericalFailure("eigen-decomposition of the covariance failed");
    const RealVector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.cast<Complex>().asDiagonal();
}

} // namespace mamimo
