#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "algstab/nilpotent.hpp"
#include "algstab/poly.hpp"
#include "algstab/seqmodel_types.hpp"
#include "algstab/spectral.hpp"
#include "algstab/types.hpp"

namespace algstab {

// Dense JSON container: {"dim": n, "re": [[...]], "im": [[...]]}, row major.
nlohmann::json matrix_to_json(const Mat& X);
Mat matrix_from_json(const nlohmann::json& j);

// Binary container: u64 little-endian dimension header, then dim*dim complex
// entries column major, each as two little-endian float64 (re, im).
void save_matrix_bin(const std::string& path, const Mat& X);
Mat load_matrix_bin(const std::string& path);

void save_matrix_json(const std::string& path, const Mat& X);
Mat load_matrix_json(const std::string& path);

// Dispatch on extension: ".bin" binary, anything else JSON.
Mat load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Mat& X);

// {"roots": [{"re":..., "im":..., "mult":...}, ...]}
nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

// Inline JSON (starts with '{') or a file path.
Polynomial parse_polynomial_arg(const std::string& arg);

// {"terms": [<matrix>...], "tail_model": "truncated" | "periodic", "period": k}
nlohmann::json matseq_to_json(const MatSeq& s);
MatSeq matseq_from_json(const nlohmann::json& j);
MatSeq load_matseq(const std::string& path);
void save_matseq(const std::string& path, const MatSeq& s);

// Inspection dumps; every matrix field uses the JSON matrix container.
nlohmann::json spectral_data_to_json(const SpectralData& sd);
nlohmann::json nil_chain_to_json(const NilChain& chain);

}  // namespace algstab
