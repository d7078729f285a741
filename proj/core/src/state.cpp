#include "sirsvp/state.hpp"
#include "sirsvp/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirsvp
{

bool is_valid(const FullState& s)
{
    if (!(s.X >= 0.0 && s.Y >= 0.0 && s.Z >= 0.0 && s.N >= 0.0)) {
        return false;
    }
    return std::abs(s.X + s.Y + s.Z - s.N) <= 1e-9 * std::max(1.0, s.N);
}

bool is_valid(const FractionState& s, double tol)
{
    if (!(s.S >= 0.0 && s.I >= 0.0 && s.R >= 0.0)) {
        return false;
    }
    if (s.N && !(*s.N >= 0.0)) {
        return false;
    }
    return std::abs(simplex_defect(s)) <= tol;
}

bool is_valid(const ReducedState& s, double tol)
{
    if (!(s.I >= -tol && s.R >= -tol && s.I + s.R <= 1.0 + tol)) {
        return false;
    }
    return !(s.I == 0.0 && s.R == 0.0);
}

FractionState normalized(const FractionState& s, double tol)
{
    if (!is_valid(s, tol)) {
        std::ostringstream os;
        os << "fraction state (" << s.S << ", " << s.I << ", " << s.R << ") is not on the simplex (defect "
           << simplex_defect(s) << ", tolerance " << tol << ")";
        throw Error(ErrorCode::SimplexViolation, os.str());
    }
    double total = s.S + s.I + s.R;
    return {s.S / total, s.I / total, s.R / total, s.N};
}

FractionState to_fractions(const FullState& s)
{
    if (!(s.N > 0.0)) {
        throw Error(ErrorCode::ZeroPopulation, "fractions undefined for N <= 0");
    }
    return {s.X / s.N, s.Y / s.N, s.Z / s.N, s.N};
}

} // namespace sirsvp
