#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eclim/channels.hpp"
#include "eclim/error.hpp"
#include "eclim/gaussian.hpp"
#include "eclim/linalg.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/opcore.hpp"

namespace eclim::io {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

namespace detail {

inline double finite_number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw Error(ErrorCode::invalid_input, what + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, what + ": non-finite value");
  return x;
}

inline Eigen::Index positive_size(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1) {
    throw Error(ErrorCode::invalid_input, what + ": '" + key + "' must be a positive integer");
  }
  return static_cast<Eigen::Index>(j[key].get<long long>());
}

inline RealMatrix real_matrix(const Json& rows, Eigen::Index n, const std::string& what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw Error(ErrorCode::invalid_input, what + ": expected " + std::to_string(n) + " rows");
  }
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::invalid_input, what + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = finite_number(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

}  // namespace detail

/// {"dim": d, "entries": [[re, im], ...]} with d^2 entries in row-major order.
/// A non-square operator may give "rows" and "cols" instead of "dim".
inline Matrix operator_from_json(const Json& j, const std::string& what = "operator") {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + ": expected an object");
  Eigen::Index rows = 0, cols = 0;
  if (j.contains("dim")) {
    rows = cols = detail::positive_size(j, "dim", what);
  } else {
    rows = detail::positive_size(j, "rows", what);
    cols = detail::positive_size(j, "cols", what);
  }
  if (!j.contains("entries") || !j["entries"].is_array()) throw Error(ErrorCode::invalid_input, what + ": missing 'entries'");
  const Json& e = j["entries"];
  if (static_cast<Eigen::Index>(e.size()) != rows * cols) {
    throw Error(ErrorCode::invalid_input, what + ": expected " + std::to_string(rows * cols) + " entries, got " +
                                              std::to_string(e.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& z = e[static_cast<std::size_t>(i * cols + k)];
      if (z.is_array() && z.size() == 2) {
        m(i, k) = Complex(detail::finite_number(z[0], what), detail::finite_number(z[1], what));
      } else {
        m(i, k) = detail::finite_number(z, what);
      }
    }
  }
  return m;
}

inline Json operator_to_json(const Matrix& m) {
  Json j;
  if (m.rows() == m.cols()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  j["entries"] = std::move(entries);
  return j;
}

inline Matrix read_operator(const std::string& path) { return operator_from_json(read_json_file(path), path); }

inline ReferenceHamiltonian read_reference(const std::string& path) {
  return ReferenceHamiltonian::from_psd(HermitianMatrix(read_operator(path)));
}

inline DensityState read_state(const std::string& path) { return DensityState(read_operator(path)); }

/// {"dim_in": d, "dim_out": e, "kraus": [<operator>, ...]}
inline KrausChannel channel_from_json(const Json& j, const std::string& what = "channel") {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + ": expected an object");
  const auto din = detail::positive_size(j, "dim_in", what);
  const auto dout = detail::positive_size(j, "dim_out", what);
  if (!j.contains("kraus") || !j["kraus"].is_array()) throw Error(ErrorCode::invalid_input, what + ": missing 'kraus'");
  std::vector<Matrix> kraus;
  for (const auto& k : j["kraus"]) kraus.push_back(operator_from_json(k, what + " Kraus operator"));
  return KrausChannel(din, dout, std::move(kraus));
}

inline Json channel_to_json(const CpMap& t) {
  Json j;
  j["dim_in"] = t.dim_in();
  j["dim_out"] = t.dim_out();
  j["kraus"] = Json::array();
  for (const auto& k : t.kraus()) j["kraus"].push_back(operator_to_json(k));
  return j;
}

/// {"dim": d, "hamiltonian": <op|null>, "k": <op|null>, "lindblad": [<op>, ...]}, exactly one of
/// hamiltonian and k.
inline LindbladGenerator generator_from_json(const Json& j, const std::string& what = "generator") {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + ": expected an object");
  const auto dim = detail::positive_size(j, "dim", what);
  const bool has_h = j.contains("hamiltonian") && !j["hamiltonian"].is_null();
  const bool has_k = j.contains("k") && !j["k"].is_null();
  if (has_h == has_k) throw Error(ErrorCode::invalid_input, what + ": give exactly one of 'hamiltonian' and 'k'");
  std::vector<Matrix> ls;
  if (j.contains("lindblad") && !j["lindblad"].is_null()) {
    if (!j["lindblad"].is_array()) throw Error(ErrorCode::invalid_input, what + ": 'lindblad' must be an array");
    for (const auto& l : j["lindblad"]) ls.push_back(operator_from_json(l, what + " Lindblad operator"));
  }
  const Matrix core = operator_from_json(has_h ? j["hamiltonian"] : j["k"], what);
  require_same_dim(core.rows(), dim, what);
  if (has_h) return LindbladGenerator::from_hamiltonian(HermitianMatrix(core), std::move(ls));
  return LindbladGenerator::from_k(core, std::move(ls));
}

inline Json generator_to_json(const LindbladGenerator& g) {
  Json j;
  j["dim"] = g.dim();
  j["hamiltonian"] = nullptr;
  j["k"] = operator_to_json(g.k());
  j["lindblad"] = Json::array();
  for (const auto& l : g.lindblad()) j["lindblad"].push_back(operator_to_json(l));
  return j;
}

inline LindbladGenerator read_generator(const std::string& path) { return generator_from_json(read_json_file(path), path); }
inline KrausChannel read_channel(const std::string& path) { return channel_from_json(read_json_file(path), path); }

/// {"modes": n, "xdot": [[..]], "ydot": [[..]]}; displacement drift is not supported.
inline gaussian::GaussianGenerator gaussian_generator_from_json(const Json& j, const std::string& what = "gaussian generator") {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + ": expected an object");
  for (const char* key : {"drift", "alpha", "displacement"}) {
    if (j.contains(key) && !j[key].is_null()) {
      throw Error(ErrorCode::invalid_input, what + ": generators with displacement drift are not supported");
    }
  }
  const auto n = detail::positive_size(j, "modes", what);
  return {detail::real_matrix(j.value("xdot", Json()), 2 * n, what + " xdot"),
          detail::real_matrix(j.value("ydot", Json()), 2 * n, what + " ydot")};
}

/// {"modes": n, "gamma": [[..]], "beta": [..]}
inline gaussian::GaussianState gaussian_state_from_json(const Json& j, const std::string& what = "gaussian state") {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + ": expected an object");
  const auto n = detail::positive_size(j, "modes", what);
  RealVector beta = RealVector::Zero(2 * n);
  if (j.contains("beta") && !j["beta"].is_null()) {
    const Json& b = j["beta"];
    if (!b.is_array() || static_cast<Eigen::Index>(b.size()) != 2 * n) {
      throw Error(ErrorCode::invalid_input, what + ": 'beta' must have " + std::to_string(2 * n) + " entries");
    }
    for (Eigen::Index i = 0; i < 2 * n; ++i) beta(i) = detail::finite_number(b[static_cast<std::size_t>(i)], what);
  }
  return {detail::real_matrix(j.value("gamma", Json()), 2 * n, what + " gamma"), beta};
}

inline Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Comma-separated list of reals, e.g. "0,0.5,1".
inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double x = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(x)) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_input, what + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::invalid_input, what + ": empty list");
  return out;
}

/// %.17g, round-trippable.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace eclim::io
