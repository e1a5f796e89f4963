#include "holonomy/serialization.hpp"

#include <cmath>
#include <cstdio>

namespace holonomy::io {

namespace {

void write(const json& value, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<size_t>(indent) * depth, ' ') : "";
  const char* newline = indent > 0 ? "\n" : "";
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += newline;
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) {
          out += ",";
          out += newline;
        }
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write(it.value(), indent, depth + 1, out);
      }
      out += newline;
      out += close_pad;
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalar = true;
      for (const auto& item : value) scalar = scalar && !item.is_structured();
      out += "[";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += scalar ? ", " : ",";
        if (!scalar) {
          out += newline;
          out += pad;
        }
        first = false;
        write(item, indent, depth + 1, out);
      }
      if (!scalar) {
        out += newline;
        out += close_pad;
      }
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = value.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += value.dump();
  }
}

const json& require_array(const json& value, const std::string& field) {
  if (!value.is_array()) throw Error(ErrorCode::Schema, field + ": expected an array");
  return value;
}

double number(const json& value, const std::string& field) {
  if (!value.is_number()) throw Error(ErrorCode::Schema, field + ": expected a number");
  return value.get<double>();
}

int integer(const json& value, const std::string& field) {
  if (!value.is_number_integer()) throw Error(ErrorCode::Schema, field + ": expected an integer");
  return value.get<int>();
}

const json& member(const json& value, const char* key, const std::string& field) {
  if (!value.is_object() || !value.contains(key)) {
    throw Error(ErrorCode::Schema, field + ": missing field '" + key + "'");
  }
  return value.at(key);
}

}  // namespace

std::string dump(const json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  return out;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& value, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (!value.is_array() || value.size() != 2) {
    throw Error(ErrorCode::Schema, field + ": complex numbers are [re, im]");
  }
  return {number(value[0], field + "[0]"), number(value[1], field + "[1]")};
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& value, const std::string& field) {
  require_array(value, field);
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) throw Error(ErrorCode::Schema, field + ": empty matrix");
  const auto cols = static_cast<Eigen::Index>(require_array(value[0], field + "[0]").size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    const json& row = require_array(value[static_cast<size_t>(i)], row_field);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::Schema, row_field + ": ragged matrix row");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = complex_from_json(row[static_cast<size_t>(j)],
                                  row_field + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

json real_matrix_to_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RMatrix real_matrix_from_json(const json& value, const std::string& field) {
  require_array(value, field);
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) throw Error(ErrorCode::Schema, field + ": empty matrix");
  const auto cols = static_cast<Eigen::Index>(require_array(value[0], field + "[0]").size());
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    const json& row = require_array(value[static_cast<size_t>(i)], row_field);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::Schema, row_field + ": ragged matrix row");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = number(row[static_cast<size_t>(j)], row_field + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

json to_json(const states::DensityMatrix& rho) {
  return {{"d_a", rho.d_a()}, {"d_b", rho.d_b()}, {"matrix", matrix_to_json(rho.matrix())}};
}

states::DensityMatrix density_from_json(const json& value) {
  const int d_a = integer(member(value, "d_a", "state"), "state.d_a");
  const int d_b = integer(member(value, "d_b", "state"), "state.d_b");
  return states::DensityMatrix::from_matrix(
      d_a, d_b, matrix_from_json(member(value, "matrix", "state"), "state.matrix"));
}

json to_json(const states::StokesTensor& s) {
  return {{"d_a", s.d_a()}, {"d_b", s.d_b()}, {"stokes", real_matrix_to_json(s.matrix())}};
}

states::StokesTensor stokes_from_json(const json& value) {
  const int d_a = integer(member(value, "d_a", "stokes"), "stokes.d_a");
  const int d_b = integer(member(value, "d_b", "stokes"), "stokes.d_b");
  return states::StokesTensor(
      d_a, d_b, real_matrix_from_json(member(value, "stokes", "stokes"), "stokes.stokes"));
}

json to_json(const transport::TransportRecord& record) {
  json steps = json::array();
  for (size_t n = 0; n < record.steps.size(); ++n) {
    const auto& step = record.steps[n];
    steps.push_back({{"step", n + 1},
                     {"u", matrix_to_json(step.u)},
                     {"v", matrix_to_json(step.v)},
                     {"intensity", step.intensity},
                     {"status", interferometer::to_string(step.status)}});
  }
  return {{"group", to_string(record.group)},
          {"steps", std::move(steps)},
          {"cumulative_u", matrix_to_json(record.cumulative_u)},
          {"cumulative_v", matrix_to_json(record.cumulative_v)},
          {"closure_residual", record.closure_residual},
          {"intensity_consistency", record.intensity_consistency}};
}

}  // namespace holonomy::io
