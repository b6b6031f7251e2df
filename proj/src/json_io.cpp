#include "varbound/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace varbound {

namespace {

double number_at(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ParseError(std::string(what) + ": non-finite entry");
    return x;
}

}  // namespace

nlohmann::json complex_matrix_to_json(const CMatrix& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k)
            row.push_back({M(i, k).real(), M(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix complex_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const auto& first = j.at(0);
    if (!first.is_array() || first.empty()) throw ParseError("matrix: expected array rows");
    const std::size_t cols = first.size();

    CMatrix M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw ParseError("matrix: ragged rows");
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& entry = row.at(k);
            if (!entry.is_array() || entry.size() != 2)
                throw ParseError("matrix: entries must be [re, im] pairs");
            M(i, k) = Complex(number_at(entry.at(0), "matrix entry"),
                              number_at(entry.at(1), "matrix entry"));
        }
    }
    return M;
}

nlohmann::json real_vector_to_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

nlohmann::json real_matrix_to_json(const Matrix& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

ObservableFile parse_observable_file(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("observable file: expected a JSON object");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw ParseError("observable file: missing integer field \"n\"");
    ObservableFile f;
    f.n = j.at("n").get<int>();
    if (f.n < 2) throw ParseError("observable file: n must be >= 2");
    if (!j.contains("observables") || !j.at("observables").is_array() ||
        j.at("observables").empty())
        throw ParseError("observable file: missing non-empty \"observables\" array");

    for (const auto& jm : j.at("observables")) {
        CMatrix M = complex_matrix_from_json(jm);
        if (M.rows() != f.n || M.cols() != f.n)
            throw ParseError("observable file: matrix size does not match n");
        f.observables.push_back(require_hermitian(M, 1e-10, "observable"));
    }
    return f;
}

nlohmann::json observable_file_to_json(const ObservableFile& f) {
    nlohmann::json j;
    j["n"] = f.n;
    j["observables"] = nlohmann::json::array();
    for (const auto& M : f.observables) j["observables"].push_back(complex_matrix_to_json(M));
    return j;
}

BipartiteState parse_state_file(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("state file: expected a JSON object");
    if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").size() != 2)
        throw ParseError("state file: missing \"dims\" = [da, db]");
    if (!j.contains("rho")) throw ParseError("state file: missing \"rho\"");
    BipartiteState st;
    if (!j.at("dims").at(0).is_number_integer() || !j.at("dims").at(1).is_number_integer())
        throw ParseError("state file: dims must be integers");
    st.dim_a = j.at("dims").at(0).get<int>();
    st.dim_b = j.at("dims").at(1).get<int>();
    st.rho = complex_matrix_from_json(j.at("rho"));
    try {
        validate_bipartite_state(st);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return st;
}

std::pair<ObservablePair, ObservablePair> parse_pairs_file(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("pairs") || !j.at("pairs").is_array() ||
        j.at("pairs").size() != 2)
        throw ParseError("pairs file: expected \"pairs\" with exactly two entries");

    ObservablePair out[2];
    for (int i = 0; i < 2; ++i) {
        const auto& jp = j.at("pairs").at(i);
        if (!jp.is_object() || !jp.contains("A") || !jp.contains("B"))
            throw ParseError("pairs file: each pair needs \"A\" and \"B\"");
        out[i].A = require_hermitian(complex_matrix_from_json(jp.at("A")), 1e-10, "pair A");
        out[i].B = require_hermitian(complex_matrix_from_json(jp.at("B")), 1e-10, "pair B");
    }
    if (out[0].A.rows() != out[1].A.rows() || out[0].B.rows() != out[1].B.rows())
        throw ParseError("pairs file: pair dimensions disagree");
    return {out[0], out[1]};
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace varbound
