#ifndef DQS_ELLIPTIC_HPP
#define DQS_ELLIPTIC_HPP

#include "dqs/bigfloat.hpp"

namespace dqs {

/// Period lattice for the sigma function attached to a q-difference base q,
/// with periods 1 and omega' = 2*pi*i/ln q. Immutable after construction.
struct PeriodLattice {
    mpfr_prec_t prec;
    BigComplex q;
    BigComplex lnq;
    BigComplex omegaPrime;
    BigComplex eta;       // quasi-period constant for the shift t -> t+1
    BigComplex etaPrime;  // for t -> t+omega'
};

/// Complex sine, exp-based.
BigComplex csin(const BigComplex& v);

/// Odd Jacobi theta function of half-period ratio tau, nome e^{i*pi*tau}.
BigComplex theta1(const BigComplex& v, const BigComplex& tau);

/// Build the lattice for |q| > 1: eta from theta derivatives at 0,
/// eta' from the Legendre relation eta*omega' - eta' = 2*pi*i.
PeriodLattice latticeConstants(const BigComplex& q, mpfr_prec_t prec);

/// Weierstrass sigma for the lattice: odd, sigma'(0) = 1, zeros on the lattice.
BigComplex sigmaEval(const BigComplex& t, const PeriodLattice& lat);

}  // namespace dqs

#endif
