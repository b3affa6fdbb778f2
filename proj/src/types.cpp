#include "cometq/types.hpp"

#include <cmath>

namespace cometq {

std::vector<cxmat> trace_free_basis(int r) {
    std::vector<cxmat> basis;
    basis.reserve(r * r - 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int p = 0; p < r; ++p) {
        for (int q = p + 1; q < r; ++q) {
            cxmat sym = cxmat::Zero(r, r);
            sym(p, q) = inv_sqrt2;
            sym(q, p) = inv_sqrt2;
            basis.push_back(sym);
            cxmat asym = cxmat::Zero(r, r);
            asym(p, q) = cx(0.0, inv_sqrt2);
            asym(q, p) = cx(0.0, -inv_sqrt2);
            basis.push_back(asym);
        }
    }
    for (int l = 1; l < r; ++l) {
        cxmat d = cxmat::Zero(r, r);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int p = 0; p < l; ++p) d(p, p) = norm;
        d(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(d);
    }
    return basis;
}

}  // namespace cometq
