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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace mamimo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Error hierarchy. Every failure the library reports derives from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A region cannot hold the requested antenna grid at the minimum spacing.
class InfeasibleRegion : public Error {
public:
    using Error::Error;
};

// Largest singular value of the channel is exactly zero.
class AllZeroChannel : public Error {
public:
    AllZeroChannel() : Error("channel matrix is identically zero") {}
    explicit AllZeroChannel(const std::string &what) : Error(what) {}
};

// An internal contract was violated by floating point (e.g. no feasible QP candidate).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// Matrix or layout dimensions are inconsistent with each other.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

// A covariance matrix is not Hermitian PSD within tolerance.
class InvalidCovariance : public Error {
public:
    using Error::Error;
};

// Bad user input: configuration values, scene files, CLI flags.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mamimo
