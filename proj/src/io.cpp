#include "steinkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <utility>
#include <vector>

namespace steinkit {

namespace {

const Json& require_key(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw JsonParseError(std::string(what) + ": missing key \"" + key + "\"");
  }
  return j.at(key);
}

Eigen::Index require_index(const Json& j, const char* key, const char* what) {
  const Json& v = require_key(j, key, what);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw JsonParseError(std::string(what) + ": \"" + key + "\" must be a nonnegative integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

double require_number(const Json& j, const char* key, const char* what) {
  const Json& v = require_key(j, key, what);
  if (!v.is_number()) {
    throw JsonParseError(std::string(what) + ": \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

// Parses one nested re/im layer into a rows x cols real matrix.
RealMatrix parse_plane(const Json& plane, Eigen::Index rows, Eigen::Index cols,
                       const char* what) {
  if (!plane.is_array() || static_cast<Eigen::Index>(plane.size()) != rows) {
    throw JsonParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  RealMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = plane.at(i);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw JsonParseError(std::string(what) + ": row " + std::to_string(i) + " must have " +
                           std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& cell = row.at(k);
      if (!cell.is_number()) {
        throw JsonParseError(std::string(what) + ": non-numeric entry");
      }
      out(i, k) = cell.get<double>();
    }
  }
  return out;
}

Json plane_to_json(const ComplexMatrix& m, bool imaginary) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(imaginary ? m(i, k).imag() : m(i, k).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = plane_to_json(m, false);
  if (m.size() > 0 && m.imag().cwiseAbs().maxCoeff() != 0.0) {
    j["im"] = plane_to_json(m, true);
  }
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const char* what = "matrix";
  const Eigen::Index rows = require_index(j, "rows", what);
  const Eigen::Index cols = require_index(j, "cols", what);
  RealMatrix re = parse_plane(require_key(j, "re", what), rows, cols, "matrix re");
  RealMatrix im = j.contains("im") ? parse_plane(j.at("im"), rows, cols, "matrix im")
                                   : RealMatrix(RealMatrix::Zero(rows, cols));
  ComplexMatrix out(rows, cols);
  out.real() = re;
  out.imag() = im;
  require_finite(out, "matrix from JSON");
  return out;
}

Json stein_set_to_json(const SteinSetSpec& s) {
  Json j;
  j["H"] = matrix_to_json(s.h());
  j["alpha"] = s.alpha();
  j["closed"] = s.closed();
  return j;
}

SteinSetSpec stein_set_from_json(const Json& j) {
  const char* what = "stein set";
  const Json& closed = require_key(j, "closed", what);
  if (!closed.is_boolean()) {
    throw JsonParseError("stein set: \"closed\" must be a boolean");
  }
  return SteinSetSpec(matrix_from_json(require_key(j, "H", what)),
                      require_number(j, "alpha", what), closed.get<bool>());
}

Json isometry_tuple_to_json(const IsometryTuple& t) {
  Json blocks = Json::array();
  for (const ComplexMatrix& b : t.blocks()) blocks.push_back(matrix_to_json(b));
  Json j;
  j["n"] = t.target_order();
  j["blocks"] = std::move(blocks);
  return j;
}

IsometryTuple isometry_tuple_from_json(const Json& j) {
  const char* what = "isometry tuple";
  const Eigen::Index n = require_index(j, "n", what);
  const Json& blocks = require_key(j, "blocks", what);
  if (!blocks.is_array() || blocks.empty()) {
    throw JsonParseError("isometry tuple: \"blocks\" must be a non-empty array");
  }
  std::vector<ComplexMatrix> parsed;
  parsed.reserve(blocks.size());
  for (const Json& b : blocks) parsed.push_back(matrix_from_json(b));
  return IsometryTuple(n, std::move(parsed));
}

Json realization_to_json(const RealizationArray& r) {
  Json j;
  j["n"] = r.state_order();
  j["m"] = r.port_size();
  if (r.state_order() > 0) {
    j["A"] = matrix_to_json(r.a());
    j["B"] = matrix_to_json(r.b());
    j["C"] = matrix_to_json(r.c());
  }
  j["D"] = matrix_to_json(r.d());
  return j;
}

RealizationArray realization_from_json(const Json& j) {
  const char* what = "realization";
  const Eigen::Index n = require_index(j, "n", what);
  const Eigen::Index m = require_index(j, "m", what);
  if (j.contains("R")) {
    return RealizationArray::from_matrix(matrix_from_json(j.at("R")), n, m);
  }
  ComplexMatrix a = j.contains("A") ? matrix_from_json(j.at("A")) : ComplexMatrix(n, n);
  ComplexMatrix b = j.contains("B") ? matrix_from_json(j.at("B")) : ComplexMatrix(n, m);
  ComplexMatrix c = j.contains("C") ? matrix_from_json(j.at("C")) : ComplexMatrix(m, n);
  if (n > 0 && (!j.contains("A") || !j.contains("B") || !j.contains("C"))) {
    throw JsonParseError("realization: A, B, C required when n > 0 (or provide \"R\")");
  }
  return RealizationArray(n, m, std::move(a), std::move(b), std::move(c),
                          matrix_from_json(require_key(j, "D", what)));
}

Json matrix_set_to_json(const MatrixSet& m) {
  Json members = Json::array();
  for (const RealMatrix& a : m.members()) members.push_back(matrix_to_json(to_complex(a)));
  Json j;
  j["n"] = m.order();
  j["members"] = std::move(members);
  return j;
}

MatrixSet matrix_set_from_json(const Json& j) {
  const char* what = "matrix set";
  const Eigen::Index n = require_index(j, "n", what);
  const Json& members = require_key(j, "members", what);
  if (!members.is_array() || members.empty()) {
    throw JsonParseError("matrix set: \"members\" must be a non-empty array");
  }
  std::vector<RealMatrix> parsed;
  parsed.reserve(members.size());
  for (const Json& b : members) {
    ComplexMatrix c = matrix_from_json(b);
    if (c.size() > 0 && c.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw JsonParseError("matrix set: members must be real");
    }
    parsed.emplace_back(c.real());
  }
  return MatrixSet(n, std::move(parsed));
}

Json stein_gap_report_to_json(const SteinGapReport& r) {
  Json j;
  j["member"] = to_string(r.member);
  j["lambda_min"] = r.lambda_min;
  j["gap"] = matrix_to_json(r.gap);
  return j;
}

Json kyp_certificate_to_json(const KypCertificate& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["lambda_min"] = c.lambda_min;
  j["P"] = matrix_to_json(c.p);
  j["residual"] = matrix_to_json(c.residual);
  return j;
}

Json db_verdict_to_json(const DbVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.status);
  j["sampled_sup"] = v.sampled_sup;
  j["worst_z"] = Json{{"re", v.worst_z.real()}, {"im", v.worst_z.imag()}};
  j["certificate"] = v.certificate.has_value() ? matrix_to_json(v.certificate->p) : Json();
  return j;
}

Json trajectory_to_json(const Trajectory& t) {
  Json states = Json::array();
  for (const RealVector& x : t.states) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) entries.push_back(x(i));
    states.push_back(std::move(entries));
  }
  Json j;
  j["states"] = std::move(states);
  j["schedule"] = t.schedule;
  j["norms"] = t.norms;
  return j;
}

std::string trajectory_to_csv(const Trajectory& t) {
  std::string out = "j,norm,member\n";
  char line[64];
  for (std::size_t j = 0; j < t.norms.size(); ++j) {
    const int member = j < t.schedule.size() ? t.schedule[j] : -1;
    std::snprintf(line, sizeof(line), "%zu,%.17g,%d\n", j, t.norms[j], member);
    out += line;
  }
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonParseError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw JsonParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw Error("failed writing file: " + path);
}

}  // namespace steinkit
