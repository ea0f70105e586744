#pragma once

#include <random>

#include "dqs/diff_system.hpp"

namespace dqs::testing {

inline ExactComplex randomScalar(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-4, 4);
    std::uniform_int_distribution<long> den(1, 3);
    return {mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng))};
}

/// Random polynomial matrix satisfying the difference-system hypotheses:
/// diagonal leading coefficient with pairwise nonreal rho ratios.
inline ExactPolyMatrix randomDiffMatrix(std::mt19937_64& rng, size_t n, int r) {
    std::uniform_int_distribution<long> num(-3, 3);
    std::vector<ExactComplex> rho(n);
    for (;;) {
        for (size_t k = 0; k < n; ++k) {
            do {
                rho[k] = ExactComplex(num(rng), num(rng));
            } while (rho[k].isZero());
        }
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = 0; j < n && ok; ++j)
                if (i != j && sgn((rho[i] / rho[j]).im) == 0) ok = false;
        if (ok) break;
    }
    ExactPolyMatrix a(n, n);
    for (size_t i = 0; i < n; ++i) a(i, i).setCoeff(r, rho[i]);
    for (int e = 0; e < r; ++e)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) a(i, j).setCoeff(e, randomScalar(rng));
    return a;
}

/// The worked 2x2 instance A(z) = diag(1,i) z + [[2,1],[1,3i]].
inline ExactPolyMatrix workedDiffInstance() {
    ExactPolyMatrix a(2, 2);
    a(0, 0).setCoeff(1, ExactComplex(1));
    a(1, 1).setCoeff(1, ExactComplex(0, 1));
    a(0, 0).setCoeff(0, ExactComplex(2));
    a(0, 1).setCoeff(0, ExactComplex(1));
    a(1, 0).setCoeff(0, ExactComplex(1));
    a(1, 1).setCoeff(0, ExactComplex(0, 3));
    return a;
}

}  // namespace dqs::testing
