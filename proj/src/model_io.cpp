#include "dpd/model.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpd {

namespace {

using nlohmann::json;

void put_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void put_vector(std::string& out, const Vector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    put_number(out, v[i]);
  }
  out += ']';
}

void put_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ',';
    put_vector(out, m.row(r).transpose());
  }
  out += ']';
}

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) throw InvalidInput(where + ": missing field '" + name + "'");
  return obj.at(name);
}

Vector get_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(where + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix get_matrix(const json& j, Eigen::Index cols, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array of rows");
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = get_vector(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) throw InvalidInput(where + ": row " + std::to_string(r) + " has wrong length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

}  // namespace

std::string serialize(const CoupledProblem& problem) {
  std::string out;
  out += "{\"N\":" + std::to_string(problem.N());
  out += ",\"S\":" + std::to_string(problem.S());
  out += ",\"b\":";
  put_vector(out, problem.b);
  out += ",\"blocks\":[";
  for (std::size_t i = 0; i < problem.N(); ++i) {
    const AgentBlock& blk = problem.blocks[i];
    if (i) out += ',';
    out += "\n{\"c\":";
    put_vector(out, blk.c);
    out += ",\"A\":";
    put_matrix(out, blk.A);
    out += ",\"D\":";
    put_matrix(out, blk.P.D);
    out += ",\"d\":";
    put_vector(out, blk.P.d);
    out += ",\"lo\":";
    put_vector(out, blk.P.lo);
    out += ",\"hi\":";
    put_vector(out, blk.P.hi);
    out += ",\"int_idx\":[";
    for (std::size_t k = 0; k < blk.int_idx.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(blk.int_idx[k]);
    }
    out += "]}";
  }
  out += "\n]}\n";
  return out;
}

CoupledProblem deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance JSON: ") + e.what(), e.byte);
  }
  CoupledProblem prob;
  const json& jN = field(doc, "N", "instance");
  const json& jS = field(doc, "S", "instance");
  if (!jN.is_number_integer() || !jS.is_number_integer()) throw InvalidInput("instance: N and S must be integers");
  prob.b = get_vector(field(doc, "b", "instance"), "b");
  const json& blocks = field(doc, "blocks", "instance");
  if (!blocks.is_array()) throw InvalidInput("instance: 'blocks' must be an array");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string where = "blocks[" + std::to_string(i) + "]";
    const json& jb = blocks[i];
    AgentBlock blk;
    blk.c = get_vector(field(jb, "c", where), where + ".c");
    const Eigen::Index n = blk.c.size();
    blk.A = get_matrix(field(jb, "A", where), n, where + ".A");
    blk.P.D = get_matrix(field(jb, "D", where), n, where + ".D");
    blk.P.d = get_vector(field(jb, "d", where), where + ".d");
    blk.P.lo = get_vector(field(jb, "lo", where), where + ".lo");
    blk.P.hi = get_vector(field(jb, "hi", where), where + ".hi");
    const json& ji = field(jb, "int_idx", where);
    if (!ji.is_array()) throw InvalidInput(where + ".int_idx: expected an array");
    for (const json& k : ji) {
      if (!k.is_number_integer()) throw InvalidInput(where + ".int_idx: expected integers");
      blk.int_idx.push_back(k.get<int>());
    }
    prob.blocks.push_back(std::move(blk));
  }
  if (jN.get<long long>() != static_cast<long long>(prob.N()))
    throw InvalidInput("instance: N = " + std::to_string(jN.get<long long>()) + " but " +
                       std::to_string(prob.N()) + " blocks present");
  if (jS.get<long long>() != static_cast<long long>(prob.S()))
    throw InvalidInput("instance: S disagrees with len(b)");
  require_valid(prob);
  return prob;
}

CoupledProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open instance file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void save_problem(const CoupledProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write instance file " + path);
  out << serialize(problem);
}

}  // namespace dpd
