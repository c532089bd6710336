#include "wqed/io.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace wqed::io {

std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string roman(int n) {
    if (n <= 0 || n > 3999) return std::to_string(n);
    static const std::pair<int, const char*> parts[] = {
        {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"},
        {90, "XC"},  {50, "L"},   {40, "XL"}, {10, "X"},   {9, "IX"},
        {5, "V"},    {4, "IV"},   {1, "I"}};
    std::string out;
    for (const auto& [v, s] : parts)
        while (n >= v) {
            out += s;
            n -= v;
        }
    return out;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
    std::string s =
        "K,branch_id,class,re_omega,im_omega,re_za,im_za,re_zb,im_zb,abs_za,abs_zb,"
        "residual,region\n";
    for (const auto& r : rows) {
        s += fmt17(r.K);
        s += ',';
        s += r.branch_id;
        s += ',';
        s += r.cls;
        s += ',';
        for (double v : {r.re_omega, r.im_omega, r.re_za, r.im_za, r.re_zb, r.im_zb,
                         r.abs_za, r.abs_zb, r.residual}) {
            s += fmt17(v);
            s += ',';
        }
        s += r.region;
        s += '\n';
    }
    return s;
}

std::string continuum_csv(const std::vector<ContinuumRow>& rows) {
    std::string s = "K,label,lo,hi\n";
    for (const auto& r : rows) {
        s += fmt17(r.K);
        s += ',';
        s += r.label;
        s += ',';
        s += fmt17(r.lo);
        s += ',';
        s += fmt17(r.hi);
        s += '\n';
    }
    return s;
}

std::string ep_csv(const std::vector<EpRow>& rows) {
    std::string s = "phi_over_pi,ratio_ep,k_ep_over_pi\n";
    for (const auto& r : rows) {
        s += fmt17(r.phi_over_pi);
        s += ',';
        s += fmt17(r.ratio_ep);
        s += ',';
        s += fmt17(r.k_ep_over_pi);
        s += '\n';
    }
    return s;
}

std::string asymptotes_csv(const std::vector<AsymptoteRow>& rows) {
    std::string s = "K,branch,re_omega,im_omega\n";
    for (const auto& r : rows) {
        s += fmt17(r.K);
        s += ',';
        s += r.branch;
        s += ',';
        s += fmt17(r.re_omega);
        s += ',';
        s += fmt17(r.im_omega);
        s += '\n';
    }
    return s;
}

namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& arr) { return arr.dump(2) + "\n"; }

}  // namespace

std::string spectrum_json(const std::vector<SpectrumRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson o;
        o["K"] = r.K;
        o["branch_id"] = r.branch_id;
        o["class"] = r.cls;
        o["re_omega"] = r.re_omega;
        o["im_omega"] = r.im_omega;
        o["re_za"] = r.re_za;
        o["im_za"] = r.im_za;
        o["re_zb"] = r.re_zb;
        o["im_zb"] = r.im_zb;
        o["abs_za"] = r.abs_za;
        o["abs_zb"] = r.abs_zb;
        o["residual"] = r.residual;
        o["region"] = r.region;
        arr.push_back(std::move(o));
    }
    return dump(arr);
}

std::string continuum_json(const std::vector<ContinuumRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson o;
        o["K"] = r.K;
        o["label"] = r.label;
        o["lo"] = r.lo;
        o["hi"] = r.hi;
        arr.push_back(std::move(o));
    }
    return dump(arr);
}

std::string ep_json(const std::vector<EpRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson o;
        o["phi_over_pi"] = r.phi_over_pi;
        o["ratio_ep"] = r.ratio_ep;        // NaN -> null
        o["k_ep_over_pi"] = r.k_ep_over_pi;
        arr.push_back(std::move(o));
    }
    return dump(arr);
}

std::string asymptotes_json(const std::vector<AsymptoteRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson o;
        o["K"] = r.K;
        o["branch"] = r.branch;
        o["re_omega"] = r.re_omega;
        o["im_omega"] = r.im_omega;
        arr.push_back(std::move(o));
    }
    return dump(arr);
}

}  // namespace wqed::io
