// ldos_io.hpp — tabulated LDOS files
//
// Format: '#' starts a comment. Data rows are
//     omega_meV  J_ph_norm  alpha_P_norm
// with omega strictly increasing. Header comments of the form
//     # PF_scale <s>
//     # gamma_ref_ueV <g>
// set the absolute scale: the emission rate at omega is s * J_ph_norm * g (ueV).
// Defaults are s = 1, g = 1.5. A two-column file has alpha_P = 1.

#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qdrf/errors.hpp"
#include "qdrf/photon.hpp"

namespace qdrf {

struct LdosTable {
    std::vector<double> omega_meV;
    std::vector<double> j_norm;
    std::vector<double> alpha_P;
    double pf_scale{1.0};
    double gamma_ref_ueV{1.5};

    reservoir::Tabulated to_reservoir() const {
        reservoir::Tabulated t;
        t.omega_meV = omega_meV;
        t.alpha_P = alpha_P;
        t.j_ph_ueV.resize(j_norm.size());
        for (std::size_t i = 0; i < j_norm.size(); ++i)
            t.j_ph_ueV[i] = pf_scale * j_norm[i] * gamma_ref_ueV / (2.0 * std::numbers::pi);
        return t;
    }
};

namespace detail {

inline double parse_number(const std::string& tok, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ConfigError(where + ": not a number: '" + tok + "'");
    if (!std::isfinite(v)) throw ConfigError(where + ": non-finite value");
    return v;
}

} // namespace detail

inline LdosTable parse_ldos(std::istream& in, const std::string& name = "ldos") {
    LdosTable t;
    std::string line;
    int row = 0;
    int columns = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string where = name + ":" + std::to_string(row);
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream hs(line.substr(hash + 1));
            std::string key, val;
            if (hs >> key >> val) {
                if (key == "PF_scale") t.pf_scale = detail::parse_number(val, where);
                else if (key == "gamma_ref_ueV") t.gamma_ref_ueV = detail::parse_number(val, where);
            }
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<double> vals;
        std::string tok;
        while (ls >> tok) vals.push_back(detail::parse_number(tok, where));
        if (vals.empty()) continue;
        if (vals.size() != 2 && vals.size() != 3)
            throw ConfigError(where + ": expected 2 or 3 columns, got " + std::to_string(vals.size()));
        if (columns == 0) columns = static_cast<int>(vals.size());
        if (static_cast<int>(vals.size()) != columns) throw ConfigError(where + ": inconsistent column count");
        if (!t.omega_meV.empty() && !(vals[0] > t.omega_meV.back()))
            throw ConfigError(where + ": omega must be strictly increasing");
        if (vals[1] < 0.0) throw ConfigError(where + ": J_ph must be >= 0");
        if (columns == 3 && vals[2] < 0.0) throw ConfigError(where + ": alpha_P must be >= 0");
        t.omega_meV.push_back(vals[0]);
        t.j_norm.push_back(vals[1]);
        t.alpha_P.push_back(columns == 3 ? vals[2] : 1.0);
    }
    if (t.omega_meV.size() < 2) throw ConfigError(name + ": need at least 2 data rows");
    if (!(t.pf_scale >= 0.0)) throw ConfigError(name + ": PF_scale must be >= 0");
    if (!(t.gamma_ref_ueV > 0.0)) throw ConfigError(name + ": gamma_ref_ueV must be > 0");
    return t;
}

inline LdosTable read_ldos(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open LDOS file '" + path + "'");
    return parse_ldos(in, path);
}

inline PhotonReservoir ingest_ldos(const std::string& path) {
    return PhotonReservoir(read_ldos(path).to_reservoir());
}

/// Local maxima of J_ph in a tabulated reservoir, sorted by frequency.
inline std::vector<double> ldos_peaks(const reservoir::Tabulated& t, double rel_threshold = 0.1) {
    std::vector<double> out;
    double jmax = 0.0;
    for (double j : t.j_ph_ueV) jmax = std::max(jmax, j);
    for (std::size_t i = 1; i + 1 < t.j_ph_ueV.size(); ++i) {
        const double a = t.j_ph_ueV[i - 1], b = t.j_ph_ueV[i], c = t.j_ph_ueV[i + 1];
        if (b > a && b >= c && b >= rel_threshold * jmax) out.push_back(t.omega_meV[i]);
    }
    return out;
}

} // namespace qdrf
