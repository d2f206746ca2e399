#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace csb {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using Rounds = Eigen::VectorXi;

// Lowest index among maximal entries.
template <typename Derived>
Index argmax_first(const Eigen::DenseBase<Derived>& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(best)) best = i;
    }
    return best;
}

}  // namespace csb
