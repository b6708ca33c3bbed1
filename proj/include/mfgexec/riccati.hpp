#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfgexec/grid.hpp"
#include "mfgexec/params.hpp"

namespace mfgexec {

enum class TableSource { closed_form, ode_oracle };

/// Time-gridded adjoint coefficients. The node arrays live on grid.t_values;
/// the *_mid arrays hold values at interval midpoints (the backward solves run
/// on a half-step grid), which the trajectory integrator needs for full
/// fourth-order accuracy.
struct RiccatiTables {
    TimeGrid grid;
    std::vector<double> phi_bar, zeta_bar, chi_bar, eta_bar;  // mean system
    std::vector<double> phi_self, zeta_self;                  // self system
    std::vector<double> phi_bar_mid, chi_bar_mid, zeta_bar_mid, eta_bar_mid;
    std::vector<double> phi_self_mid, zeta_self_mid;
    TableSource source = TableSource::ode_oracle;
};

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t_blowup)
        : std::runtime_error(what), t_blowup_(t_blowup) {}
    double t_blowup() const noexcept { return t_blowup_; }

private:
    double t_blowup_;
};

/// Backward RK4 of the four coupled mean-system ODEs from t=T to t=0, without
/// imposing the phi=zeta / chi=eta symmetry. Aborts with BlowUpError if any
/// component exceeds 1e12 in magnitude.
RiccatiTables solve_mean_system_oracle(const ParamSet& p, const TimeGrid& grid);

/// Backward RK4 of the two coupled self-system ODEs (no symmetry imposed).
RiccatiTables solve_self_system_oracle(const ParamSet& p, const TimeGrid& grid);

/// Both systems on one grid, merged into a single table set.
RiccatiTables solve_oracle(const ParamSet& p, const TimeGrid& grid);

/// Printed closed form for the mean-system phi, evaluated verbatim with
/// overflow-safe rescaling of the exponentials past exponent 300.
double phi_bar_closed_form(double t, const ParamSet& p, const Coefficients& c);

/// Printed closed form for the self-system phi (D, gamma±, B version).
double phi_self_closed_form(double t, const ParamSet& p, const Coefficients& c);

/// chi_bar from a phi_bar table via the exponential-of-integral solution,
/// integrand written as B*phi_bar - D, composite Simpson on the grid.
std::vector<double> chi_bar_from_phibar(const RiccatiTables& tables, const ParamSet& p);

/// CSV export: t, phi_bar, zeta_bar, chi_bar, eta_bar, phi_self, zeta_self, source.
void write_riccati_csv(const RiccatiTables& tables, const std::filesystem::path& file);

}  // namespace mfgexec
