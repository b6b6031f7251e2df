#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "varbound/entanglement.hpp"
#include "varbound/types.hpp"

namespace varbound {

// On-disk observable set: { "n": <int>, "observables": [ <matrix>, ... ] } where a
// matrix is an n x n row-major grid of [re, im] pairs.
struct ObservableFile {
    int n = 0;
    std::vector<CMatrix> observables;
};

nlohmann::json complex_matrix_to_json(const CMatrix& M);
CMatrix complex_matrix_from_json(const nlohmann::json& j);

nlohmann::json real_vector_to_json(const Vector& v);
nlohmann::json real_matrix_to_json(const Matrix& M);

// Structural validation throws ParseError; Hermiticity defects beyond 1e-10 throw
// HermiticityError.  Parsed matrices are symmetrized.
ObservableFile parse_observable_file(const nlohmann::json& j);
nlohmann::json observable_file_to_json(const ObservableFile& f);

// { "dims": [da, db], "rho": <matrix> }; state validity checked.
BipartiteState parse_state_file(const nlohmann::json& j);

// { "pairs": [ {"A": <matrix>, "B": <matrix>}, {"A": .., "B": ..} ] } --- exactly two
// pairs; A matrices share one dimension, B matrices another.
std::pair<ObservablePair, ObservablePair> parse_pairs_file(const nlohmann::json& j);

// FNV-1a 64-bit digest of raw bytes, as "fnv1a64:<hex>".
std::string fnv1a_hex(const std::string& bytes);

}  // namespace varbound
