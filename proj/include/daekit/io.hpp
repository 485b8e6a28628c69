#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "daekit/core.hpp"
#include "daekit/indices.hpp"
#include "daekit/phdae.hpp"
#include "daekit/solver.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit::io {

using json = nlohmann::json;

/// Pencil file contents; Q is present for port-Hamiltonian inputs.
struct PencilFile {
    ComplexMatrix E;
    ComplexMatrix A;
    std::optional<ComplexMatrix> Q;
    json provenance;

    MatrixPencil pencil() const { return {E, A}; }
    /// (E, AQ) for pH inputs, (E, A) otherwise.
    MatrixPencil dynamics() const { return Q ? MatrixPencil{E, A * *Q} : MatrixPencil{E, A}; }
    PhPencil ph() const { return {E, A, *Q}; }
};

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexMatrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
    return out;
}

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    raise(ErrorCode::InvalidInput, "complex entries must be numbers or [re, im] pairs");
}

inline ComplexMatrix matrix_from_json(const json& j, Eigen::Index n, const std::string& name) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
        raise(ErrorCode::InvalidInput, name + " must have " + std::to_string(n) + " rows");
    ComplexMatrix M(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            raise(ErrorCode::InvalidInput, name + " row " + std::to_string(i) + " must have " +
                                               std::to_string(n) + " entries");
        for (Eigen::Index k = 0; k < n; ++k) M(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    if (!all_finite(M)) raise(ErrorCode::InvalidInput, name + " has non-finite entries");
    return M;
}

inline ComplexVector vector_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) raise(ErrorCode::InvalidInput, name + " must be an array");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

inline json pencil_to_json(const ComplexMatrix& E, const ComplexMatrix& A,
                           const std::optional<ComplexMatrix>& Q = std::nullopt,
                           const json& provenance = nullptr) {
    json j;
    j["n"] = E.rows();
    j["E"] = to_json(E);
    j["A"] = to_json(A);
    if (Q) j["Q"] = to_json(*Q);
    if (!provenance.is_null()) j["provenance"] = provenance;
    return j;
}

inline PencilFile pencil_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        raise(ErrorCode::InvalidInput, "pencil JSON needs an integer field \"n\"");
    const long long n = j["n"].get<long long>();
    if (n < 1) raise(ErrorCode::InvalidInput, "n must be positive");
    if (!j.contains("E") || !j.contains("A"))
        raise(ErrorCode::InvalidInput, "pencil JSON needs fields \"E\" and \"A\"");
    PencilFile f;
    f.E = matrix_from_json(j["E"], n, "E");
    f.A = matrix_from_json(j["A"], n, "A");
    if (j.contains("Q") && !j["Q"].is_null()) f.Q = matrix_from_json(j["Q"], n, "Q");
    if (j.contains("provenance")) f.provenance = j["provenance"];
    return f;
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::InvalidInput, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        raise(ErrorCode::InvalidInput, "malformed JSON in " + path.string() + ": " + e.what());
    }
}

inline PencilFile load_pencil(const std::filesystem::path& path) {
    return pencil_from_json(read_json_file(path));
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::InvalidInput, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) raise(ErrorCode::InvalidInput, "failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    write_atomic(path, j.dump(2) + "\n");
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Header t,re(x_1),im(x_1),...[,H]; 17 significant digits.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",re(x_" << i << "),im(x_" << i << ")";
    if (traj.hamiltonian) os << ",H";
    os << "\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        os << format_double(traj.times[j]);
        for (Eigen::Index i = 0; i < n; ++i)
            os << "," << format_double(traj.states[j](i).real()) << ","
               << format_double(traj.states[j](i).imag());
        if (traj.hamiltonian) os << "," << format_double((*traj.hamiltonian)[j]);
        os << "\n";
    }
    return os.str();
}

inline json to_json(const GrowthEstimate& g) {
    return {{"omega", g.omega},
            {"slope", g.slope},
            {"index", g.index},
            {"fit_residual", g.fit_residual},
            {"fit_points", g.fit_points},
            {"num_samples", g.samples.size()},
            {"rounding_warning", g.rounding_warning},
            {"slope_tolerance", g.slope_tolerance}};
}

inline json to_json(const RadialityEvidence& r) {
    return {{"p", r.p},
            {"omega", r.omega},
            {"box_radius", r.box_radius},
            {"n_max", r.n_max},
            {"samples", r.num_samples},
            {"seed", r.seed},
            {"max_ratio", r.max_ratio},
            {"max_ratio_10x", r.max_ratio_large},
            {"growth", r.growth},
            {"growth_threshold", r.growth_threshold},
            {"C", r.C},
            {"verdict", to_string(r.verdict)}};
}

inline json to_json(const IndexRelations& r) {
    return {{"p_nilp", r.p_nilp},
            {"p_res", r.p_res},
            {"radiality_p", r.radiality_p},
            {"radiality_supported", r.radiality_supported},
            {"chain_holds", r.chain_holds},
            {"nilpotency_bound_holds", r.nilpotency_bound_holds},
            {"finding", r.finding}};
}

inline json to_json(const WeierstrassDecomposition& w, const MatrixPencil& pencil) {
    const Eigen::Index n = w.d1 + w.d2;
    ComplexMatrix I = ComplexMatrix::Identity(n, n);
    json res;
    res["reconstruction"] = reconstruction_residual(pencil, w);
    res["P_idempotence"] = spectral_norm(w.P * w.P - w.P);
    res["R_idempotence"] = spectral_norm(w.R * w.R - w.R);
    res["EP_minus_RE"] = spectral_norm(pencil.E * w.P - w.R * pencil.E);
    res["AP_minus_RA"] = spectral_norm(pencil.A * w.P - w.R * pencil.A);
    return {{"dims", {{"n", n}, {"d1", w.d1}, {"d2", w.d2}}},
            {"nilpotency_index", w.nilpotency_index},
            {"A1", to_json(w.A1)},
            {"N", to_json(w.N)},
            {"T_L", to_json(w.left_transform)},
            {"T_R", to_json(w.right_transform)},
            {"P", to_json(w.P)},
            {"R", to_json(w.R)},
            {"condition", {{"T_L", w.condition_left}, {"T_R", w.condition_right}}},
            {"residuals", res}};
}

inline json to_json(const PhReport& r) {
    json j;
    j["symmetry_residual"] = r.symmetry_residual;
    j["psd_min_eig"] = r.psd_min_eig;
    j["dissipativity_max_eig"] = r.dissipativity_max_eig;
    j["q_condition"] = r.q_condition;
    j["e_rank"] = r.e_rank;
    j["checks"] = {{"symmetric", r.symmetric},
                   {"nonnegative", r.nonnegative},
                   {"dissipative", r.dissipative},
                   {"q_invertible", r.q_invertible},
                   {"passed", r.passed}};
    j["normalized"] = {{"hermitian_residual", r.normalized_hermitian_residual},
                       {"psd_min_eig", r.normalized_psd_min_eig}};
    j["T"] = r.T ? to_json(*r.T) : json(nullptr);
    j["c_T"] = r.c_T;
    j["BTB_residual"] = r.btb_residual;
    j["S"] = r.S ? to_json(*r.S) : json(nullptr);
    j["c_S"] = r.c_S;
    j["ESE_residual"] = r.ese_residual;
    j["real_index"] = r.real_index ? to_json(*r.real_index) : json(nullptr);
    j["complex_index"] = r.complex_index ? to_json(*r.complex_index) : json(nullptr);
    if (r.subspace_conditions) {
        j["subspace_conditions"] = {{"Qstar_Z1_eq_X1", r.subspace_conditions->first},
                                    {"Q_X1_eq_Z1", r.subspace_conditions->second}};
    } else {
        j["subspace_conditions"] = nullptr;
    }
    j["notes"] = r.notes;
    return j;
}

inline json to_json(const QuadratureConfig& q) {
    return {{"initial_half_length", q.initial_half_length},
            {"nodes_per_panel", q.nodes_per_panel},
            {"tolerance", q.tolerance},
            {"max_refinements", q.max_refinements},
            {"panel_length", q.panel_length}};
}

inline json to_json(const QuadratureStats& s) {
    return {{"half_length", s.half_length},
            {"panel_length", s.panel_length},
            {"tail_estimate", s.tail_estimate},
            {"last_difference", s.last_difference},
            {"evaluations", s.evaluations}};
}

/// Parses "1,2.5,-1:0.5" (entries re or re:im) into a vector.
inline ComplexVector parse_vector(const std::string& text) {
    std::vector<Complex> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        item = trim(item);
        if (item.empty()) raise(ErrorCode::InvalidInput, "empty vector entry in '" + text + "'");
        const auto colon = item.find(':');
        try {
            std::size_t used = 0;
            if (colon == std::string::npos) {
                double re = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                vals.emplace_back(re, 0.0);
            } else {
                std::string a = trim(item.substr(0, colon)), b = trim(item.substr(colon + 1));
                double re = std::stod(a, &used);
                if (used != a.size()) throw std::invalid_argument(a);
                double im = std::stod(b, &used);
                if (used != b.size()) throw std::invalid_argument(b);
                vals.emplace_back(re, im);
            }
        } catch (const std::logic_error&) {
            raise(ErrorCode::InvalidInput, "cannot parse vector entry '" + item + "'");
        }
    }
    if (vals.empty()) raise(ErrorCode::InvalidInput, "vector is empty");
    ComplexVector v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

/// A vector file is a JSON array of numbers or [re, im] pairs.
inline ComplexVector load_vector(const std::filesystem::path& path) {
    return vector_from_json(read_json_file(path), path.string());
}

}  // namespace daekit::io
