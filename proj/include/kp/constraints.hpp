#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kp/diffop.hpp"

namespace kp {

struct ConstraintEq {
    DiffOperator op;
    int half_order = 0;  // m: coefficient of lambda_1^{-m/2}
    int P = 0;           // matrix size used in the derivation
    int max_w2 = 0;      // terms complete for output weight <= max_w2 - m (doubled)
    int validity_w2() const { return max_w2 - half_order; }
    std::string to_json() const;
};

struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeriveOptions {
    int max_w2 = 9;         // doubled weight up to which the tower is complete
    int extra_points = 8;   // rest samples beyond the fit basis size
    int max_negative = 1;   // inverse power-sum factors allowed in the fit basis
    int series_margin = 8;  // extra y_1 orders carried through intermediate products
    unsigned seed = 20240601;
};

// Expands the conjugated eigenvalue equation in y_1 = lambda_1^{-1/2}.
// Sign normalized so the leading term is -m d/dp_m.
std::vector<ConstraintEq> derive_tower(const std::vector<int>& orders, int P, const DeriveOptions& opt = {});
ConstraintEq derive_constraint(int m, int P, const DeriveOptions& opt = {});

struct StabilityReport {
    bool stable = true;
    std::vector<std::string> differences;
};
StabilityReport compare_constraints(const ConstraintEq& a, const ConstraintEq& b);

struct SolveError : std::runtime_error {
    enum Kind { Undetermined, Conflict } kind;
    std::vector<Monomial> undetermined;
    SolveError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// g = exp(F) solved degree by degree; F returned in the model's own k convention
TSeries solve_F(int w2, const std::vector<ConstraintEq>& tower);
TSeries residual(const ConstraintEq& eq, const TSeries& F);

// k -> -k: the convention of the printed free-energy table
inline TSeries table_convention(const TSeries& F) { return F.flip_k(); }

}  // namespace kp

namespace kp {

// tower O_1..O_{max(w2,1)} at size P, then solve_F; model convention
TSeries free_energy(int w2, int P = 5, const DeriveOptions& opt = {});

}  // namespace kp
