#ifndef DFRC_MARCUM_HPP
#define DFRC_MARCUM_HPP

namespace dfrc {

/// First-order Marcum Q function Q1(a, b), evaluated via the noncentral
/// chi-square series to ~1e-10 absolute.
double marcum_q1(double a, double b);

}  // namespace dfrc

#endif
