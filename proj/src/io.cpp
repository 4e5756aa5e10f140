#include "mgarch/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace mgarch::io {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected a non-empty array of rows");
  }
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorCode::InvalidInput, std::string(what) + ": ragged rows");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-numeric entry");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

json complex_to_json(const ComplexVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
  return arr;
}

json spec_to_json(const GarchSpec& spec) {
  return {{"d", spec.d}, {"c", vector_to_json(spec.c)}, {"A", matrix_to_json(spec.A)}, {"B", matrix_to_json(spec.B)}};
}

GarchSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "spec: expected a JSON object");
  for (const char* key : {"d", "c", "A", "B"}) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("spec: missing field '") + key + "'");
  }
  if (!j["d"].is_number_integer()) throw Error(ErrorCode::InvalidInput, "spec: 'd' must be an integer");
  GarchSpec spec;
  spec.d = j["d"].get<Index>();
  spec.c = vector_from_json(j["c"], "spec.c");
  spec.A = matrix_from_json(j["A"], "spec.A");
  spec.B = matrix_from_json(j["B"], "spec.B");
  spec.validate();
  return spec;
}

json moments_to_json(const MomentSet& ms) {
  return {{"h", vector_to_json(ms.h)},
          {"M0", matrix_to_json(ms.M0)},
          {"M1", matrix_to_json(ms.M1)},
          {"M2", matrix_to_json(ms.M2)}};
}

MomentSet moments_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "moments: expected a JSON object");
  for (const char* key : {"h", "M0", "M1", "M2"}) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("moments: missing field '") + key + "'");
  }
  MomentSet ms{vector_from_json(j["h"], "moments.h"), matrix_from_json(j["M0"], "moments.M0"),
               matrix_from_json(j["M1"], "moments.M1"), matrix_from_json(j["M2"], "moments.M2")};
  ms.validate();
  return ms;
}

json diagnostics_to_json(const Diagnostics& d) {
  json warnings = json::array();
  for (const auto& w : d.warnings) warnings.push_back({{"code", w.code}, {"message", w.message}});
  return {{"stationary", d.stationary},
          {"phi_spectral_radius", d.phi_spectral_radius},
          {"invertible", d.invertible},
          {"b_spectral_radius", d.b_spectral_radius},
          {"h_positive", d.h_positive},
          {"warnings", warnings}};
}

json report_to_json(const EstimateReport& rep) {
  return {{"spec", spec_to_json(rep.spec)},
          {"sigma", matrix_to_json(rep.sigma)},
          {"phi", matrix_to_json(rep.phi)},
          {"p_eigenvalues", complex_to_json(rep.p_eigenvalues)},
          {"b_eigenvalues", complex_to_json(rep.b_eigenvalues)},
          {"residual_pme", rep.residual_pme},
          {"residual_nme", rep.residual_nme},
          {"sigma_symmetry_gap", rep.sigma_symmetry_gap},
          {"sigma_positive", rep.sigma_positive},
          {"moments", moments_to_json(rep.moments)},
          {"warnings", diagnostics_to_json(rep.warnings)}};
}

json asymptotics_to_json(const AsymptoticReport& rep) {
  // std_errors has length dbar + 2 dbar^2
  Index dbar = 0;
  while (dbar + 2 * dbar * dbar < rep.std_errors.size()) ++dbar;
  json se = json::object();
  const auto names = parameter_names(dbar);
  for (std::size_t i = 0; i < names.size() && static_cast<Index>(i) < rep.std_errors.size(); ++i) {
    se[names[i]] = rep.std_errors(static_cast<Index>(i));
  }
  return {{"std_errors", se},
          {"jacobian", matrix_to_json(rep.jacobian)},
          {"xi", matrix_to_json(rep.xi)},
          {"psi_method", std::string(to_string(rep.psi_method))},
          {"n", rep.n},
          {"xi_clipped", rep.xi_clipped},
          {"psi_clipped", rep.psi_clipped},
          {"moment_assumption_unverified", rep.moment_assumption_unverified}};
}

json aggregated_to_json(const AggregatedSpec& agg) {
  json j = spec_to_json(agg.spec_m);
  j["m"] = agg.m;
  j["kind"] = std::string(to_string(agg.kind));
  j["sigma_m"] = matrix_to_json(agg.sigma_m);
  j["gamma0_m"] = matrix_to_json(agg.gamma0_m);
  j["gamma1_m"] = matrix_to_json(agg.gamma1_m);
  j["p_eigenvalues"] = complex_to_json(agg.report.p_eigenvalues);
  j["b_eigenvalues"] = complex_to_json(agg.report.b_eigenvalues);
  j["residual_pme"] = agg.report.residual_pme;
  j["residual_nme"] = agg.report.residual_nme;
  j["warnings"] = diagnostics_to_json(agg.report.warnings);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Matrix read_matrix_file(const std::string& path, const char* key) {
  const json j = read_json_file(path);
  if (j.is_object()) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, path + ": missing field '" + key + "'");
    return matrix_from_json(j[key], key);
  }
  return matrix_from_json(j, key);
}

void write_returns_csv(std::ostream& os, const Matrix& y) {
  for (Index j = 0; j < y.cols(); ++j) os << (j ? "," : "") << 'y' << (j + 1);
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index t = 0; t < y.rows(); ++t) {
    for (Index j = 0; j < y.cols(); ++j) os << (j ? "," : "") << y(t, j);
    os << '\n';
  }
}

void write_returns_csv(const std::string& path, const Matrix& y) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  write_returns_csv(out, y);
}

Matrix read_returns_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidInput, "CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty()) throw Error(ErrorCode::InvalidInput, "CSV: empty header");
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != "y" + std::to_string(j + 1)) {
      throw Error(ErrorCode::InvalidInput, "CSV: header must be y1,...,yd (got '" + header[j] + "')");
    }
  }
  const auto d = static_cast<Index>(header.size());
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Index count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        values.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "CSV: bad number '" + cell + "' on line " + std::to_string(lineno));
      }
      ++count;
    }
    if (count != d) {
      throw Error(ErrorCode::InvalidInput, "CSV: expected " + std::to_string(d) + " fields on line " +
                                               std::to_string(lineno));
    }
  }
  const auto n = static_cast<Index>(values.size()) / d;
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(), n, d);
}

Matrix read_returns_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  return read_returns_csv(in);
}

}  // namespace mgarch::io
