// asynchbf - cooperative leakage beamforming for underlay spectrum sharing
// Copyright (C) 2026 The asynchbf authors
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

#ifndef ASYNCHBF_TYPES_HPP
#define ASYNCHBF_TYPES_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace asynchbf
{
    using cxd = std::complex<double>;
    using MatC = Eigen::MatrixXcd;
    using VecC = Eigen::VectorXcd;
    using MatR = Eigen::MatrixXd;
    using VecR = Eigen::VectorXd;
    using Index = Eigen::Index;
} // namespace asynchbf

#endif
