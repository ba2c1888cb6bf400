#include "algstab/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "algstab/errors.hpp"

namespace algstab {

using nlohmann::json;

namespace {

json real_part_rows(const Mat& X, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      row.push_back(imag ? X(i, j).imag() : X(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json matrix_to_json(const Mat& X) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("matrix_to_json: matrix is not square");
  json j;
  j["dim"] = X.rows();
  j["re"] = real_part_rows(X, false);
  j["im"] = real_part_rows(X, true);
  return j;
}

Mat matrix_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw ValidationError("matrix JSON: missing dim/re/im");
  const Eigen::Index n = j.at("dim").get<Eigen::Index>();
  if (n <= 0) throw ValidationError("matrix JSON: dim must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != n ||
      static_cast<Eigen::Index>(im.size()) != n)
    throw ValidationError("matrix JSON: row count mismatch");
  Mat X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rrow = re.at(static_cast<std::size_t>(i));
    const auto& irow = im.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(rrow.size()) != n ||
        static_cast<Eigen::Index>(irow.size()) != n)
      throw ValidationError("matrix JSON: column count mismatch");
    for (Eigen::Index jj = 0; jj < n; ++jj)
      X(i, jj) = Complex(rrow.at(static_cast<std::size_t>(jj)).get<double>(),
                         irow.at(static_cast<std::size_t>(jj)).get<double>());
  }
  if (!all_finite(X)) throw ValidationError("matrix JSON: non-finite entries");
  return X;
}

void save_matrix_bin(const std::string& path, const Mat& X) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("save_matrix_bin: matrix is not square");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("save_matrix_bin: cannot open " + path);
  const std::uint64_t dim = static_cast<std::uint64_t>(X.rows());
  f.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  // Column major complex<double> is the in-memory layout already.
  f.write(reinterpret_cast<const char*>(X.data()),
          static_cast<std::streamsize>(sizeof(Complex) * X.size()));
  if (!f) throw ValidationError("save_matrix_bin: write failed for " + path);
}

Mat load_matrix_bin(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("load_matrix_bin: cannot open " + path);
  std::uint64_t dim = 0;
  f.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (!f || dim == 0 || dim > (1u << 20))
    throw ValidationError("load_matrix_bin: bad dimension header in " + path);
  Mat X(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  f.read(reinterpret_cast<char*>(X.data()),
         static_cast<std::streamsize>(sizeof(Complex) * X.size()));
  if (!f) throw ValidationError("load_matrix_bin: truncated file " + path);
  if (!all_finite(X))
    throw ValidationError("load_matrix_bin: non-finite entries in " + path);
  return X;
}

void save_matrix_json(const std::string& path, const Mat& X) {
  std::ofstream f(path);
  if (!f) throw ValidationError("save_matrix_json: cannot open " + path);
  f << matrix_to_json(X).dump(2) << "\n";
}

Mat load_matrix_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("load_matrix_json: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError("load_matrix_json: parse error in " + path + ": " +
                          e.what());
  }
  return matrix_from_json(j);
}

namespace {
bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

Mat load_matrix(const std::string& path) {
  return has_suffix(path, ".bin") ? load_matrix_bin(path) : load_matrix_json(path);
}

void save_matrix(const std::string& path, const Mat& X) {
  if (has_suffix(path, ".bin"))
    save_matrix_bin(path, X);
  else
    save_matrix_json(path, X);
}

json polynomial_to_json(const Polynomial& p) {
  json roots = json::array();
  for (const auto& rf : p.roots())
    roots.push_back({{"re", rf.root.real()},
                     {"im", rf.root.imag()},
                     {"mult", rf.multiplicity}});
  return json{{"roots", std::move(roots)}};
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.contains("roots") || !j.at("roots").is_array())
    throw ValidationError("polynomial JSON: missing roots array");
  std::vector<RootFactor> roots;
  for (const auto& r : j.at("roots")) {
    RootFactor rf;
    rf.root = Complex(r.value("re", 0.0), r.value("im", 0.0));
    rf.multiplicity = r.value("mult", 1);
    roots.push_back(rf);
  }
  return Polynomial(std::move(roots));
}

Polynomial parse_polynomial_arg(const std::string& arg) {
  json j;
  try {
    if (!arg.empty() && arg.front() == '{') {
      j = json::parse(arg);
    } else {
      std::ifstream f(arg);
      if (!f) throw ValidationError("polynomial: cannot open " + arg);
      f >> j;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("polynomial: parse error: ") + e.what());
  }
  return polynomial_from_json(j);
}

json matseq_to_json(const MatSeq& s) {
  json terms = json::array();
  for (const Mat& t : s.terms) terms.push_back(matrix_to_json(t));
  json j;
  j["terms"] = std::move(terms);
  j["tail_model"] = s.tail == TailModel::Truncated ? "truncated" : "periodic";
  if (s.tail == TailModel::Periodic) j["period"] = s.period;
  return j;
}

MatSeq matseq_from_json(const json& j) {
  if (!j.contains("terms") || !j.at("terms").is_array())
    throw ValidationError("sequence JSON: missing terms array");
  MatSeq s;
  for (const auto& t : j.at("terms")) s.terms.push_back(matrix_from_json(t));
  const std::string tail = j.value("tail_model", "truncated");
  if (tail == "truncated") {
    s.tail = TailModel::Truncated;
  } else if (tail == "periodic") {
    s.tail = TailModel::Periodic;
    s.period = j.value("period", 1);
    if (s.period < 1)
      throw ValidationError("sequence JSON: periodic tail needs period >= 1");
  } else {
    throw ValidationError("sequence JSON: unknown tail_model '" + tail + "'");
  }
  if (s.length() < 3)
    throw ValidationError("sequence JSON: need at least 3 terms");
  return s;
}

MatSeq load_matseq(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("load_matseq: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError("load_matseq: parse error in " + path + ": " + e.what());
  }
  return matseq_from_json(j);
}

void save_matseq(const std::string& path, const MatSeq& s) {
  std::ofstream f(path);
  if (!f) throw ValidationError("save_matseq: cannot open " + path);
  f << matseq_to_json(s).dump(2) << "\n";
}

json spectral_data_to_json(const SpectralData& sd) {
  json j;
  j["cond_s"] = sd.cond_s;
  j["metric"] = matrix_to_json(sd.metric);
  j["similarity_image"] = matrix_to_json(sd.similarity_image);
  json e = json::array(), p = json::array();
  for (const Mat& m : sd.idempotents) e.push_back(matrix_to_json(m));
  for (const Mat& m : sd.projections) p.push_back(matrix_to_json(m));
  j["idempotents"] = std::move(e);
  j["projections"] = std::move(p);
  return j;
}

json nil_chain_to_json(const NilChain& chain) {
  json j;
  j["order"] = chain.order;
  j["tau"] = chain.tau;
  j["ranks"] = chain.ranks;
  j["cuts"] = chain.cuts;
  j["gap_ratios"] = chain.gap_ratios;
  json flags = json::array();
  for (const Mat& m : chain.flags) flags.push_back(matrix_to_json(m));
  j["flags"] = std::move(flags);
  return j;
}

}  // namespace algstab
