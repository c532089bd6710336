#pragma once
// Output records and serialization: CSV with fixed schemas and 17-significant-
// digit floats, plus a JSON mirror of the same records.

#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/sweep.hpp"

namespace wqed::io {

// %.17g
std::string fmt17(double x);
std::string roman(int n);

struct SpectrumRow {
    double K;
    std::string branch_id;
    std::string cls;
    double re_omega, im_omega;
    double re_za, im_za, re_zb, im_zb;
    double abs_za, abs_zb;
    double residual;
    std::string region;
};

struct ContinuumRow {
    double K;
    std::string label;
    double lo, hi;
};

struct EpRow {
    double phi_over_pi;
    double ratio_ep;       // NaN marks a failed point
    double k_ep_over_pi;   // NaN marks a failed point
};

struct AsymptoteRow {
    double K;
    std::string branch;  // k0_plus, k0_minus, edge_fwd, edge_bwd
    double re_omega, im_omega;
};

std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
std::string continuum_csv(const std::vector<ContinuumRow>& rows);
std::string ep_csv(const std::vector<EpRow>& rows);
std::string asymptotes_csv(const std::vector<AsymptoteRow>& rows);

// same records as an array of objects; NaN serializes as null
std::string spectrum_json(const std::vector<SpectrumRow>& rows);
std::string continuum_json(const std::vector<ContinuumRow>& rows);
std::string ep_json(const std::vector<EpRow>& rows);
std::string asymptotes_json(const std::vector<AsymptoteRow>& rows);

}  // namespace wqed::io
