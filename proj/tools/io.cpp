#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace icausal::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field \"") + key + "\": " + e.what());
  }
}

void dump(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      if (v == 0.0) v = 0.0;  // no negative zero
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << s;
}

std::string canonical(const json& j) {
  std::string s;
  dump(j, s, 0);
  return s + "\n";
}

json to_json(const Mat& m) {
  json re = json::array(), im = json::array();
  bool complex = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json a = json::array(), b = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      a.push_back(m(r, c).real());
      b.push_back(m(r, c).imag());
      complex = complex || m(r, c).imag() != 0.0;
    }
    re.push_back(a);
    im.push_back(b);
  }
  json j{{"re", re}};
  if (complex) j["im"] = im;
  return j;
}

Mat mat_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array()) throw InputError("matrix needs an \"re\" array");
  const json& re = j["re"];
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
  Mat m = Mat::Zero(rows, cols);
  try {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(re[static_cast<std::size_t>(r)].size()) != cols) throw InputError("ragged matrix");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
    if (j.contains("im")) {
      const json& im = j["im"];
      if (static_cast<Eigen::Index>(im.size()) != rows) throw InputError("imaginary part has the wrong shape");
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(im[static_cast<std::size_t>(r)].size()) != cols)
          throw InputError("imaginary part has the wrong shape");
        for (Eigen::Index c = 0; c < cols; ++c)
          m(r, c) += cplx(0.0, im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("matrix entry: ") + e.what());
  }
  return m;
}

json to_json(const QcQc& q) {
  json blocks = json::array();
  for (const auto& [key, op] : q.blocks) {
    json K = json::array();
    for (int k = 1; k <= q.n_agents; ++k)
      if (contains(key.K, k)) K.push_back(k);
    json b = to_json(op.m);
    b["K"] = K;
    b["k"] = key.k;
    b["to"] = key.to;
    blocks.push_back(b);
  }
  return {{"n_agents", q.n_agents}, {"d_in", q.d_in},        {"d_out", q.d_out}, {"d_past", q.d_past},
          {"d_future", q.d_future}, {"ancillas", q.ancillas}, {"blocks", blocks}};
}

QcQc qcqc_from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw InputError("QC-QC description must be an object");
  QcQc q(field<int>(j, "n_agents"), field<std::vector<int>>(j, "d_in"), field<std::vector<int>>(j, "d_out"),
         field<int>(j, "d_past"), field<int>(j, "d_future"), field<std::vector<std::vector<int>>>(j, "ancillas"));
  if (!j.contains("blocks") || !j["blocks"].is_array()) throw InputError("missing \"blocks\" array");
  for (const auto& b : j["blocks"]) {
    AgentMask K = 0;
    for (int k : field<std::vector<int>>(b, "K")) {
      if (k < 1 || k > q.n_agents) throw InputError("agent " + std::to_string(k) + " out of range");
      K |= bit(k);
    }
    Mat m;
    if (b.contains("file")) {
      auto p = base / field<std::string>(b, "file");
      if (!std::filesystem::exists(p)) throw InputError("missing block file " + p.string());
      m = mat_from_json(read_json(p));
    } else {
      m = mat_from_json(b);
    }
    q.set_block(K, field<int>(b, "k"), field<int>(b, "to"), m);
  }
  return q;
}

json to_json(const ProcessMatrix& pm, double prune) {
  json wires = json::array();
  for (const auto& w : pm.w.in_sig.wires()) wires.push_back({{"name", w.name}, {"dim", w.dim}});
  json agents = json::array();
  for (const auto& a : pm.layout.agents) agents.push_back({{"name", a.name}, {"in", a.in}, {"out", a.out}});
  json entries = json::array();
  for (Eigen::Index c = 0; c < pm.w.m.cols(); ++c)
    for (Eigen::Index r = 0; r < pm.w.m.rows(); ++r) {
      const cplx v = pm.w.m(r, c);
      if (std::abs(v) > prune) entries.push_back({r, c, v.real(), v.imag()});
    }
  return {{"wires", wires},
          {"layout", {{"past", pm.layout.past}, {"future", pm.layout.future}, {"agents", agents}}},
          {"entries", entries}};
}

ProcessMatrix pm_from_json(const json& j) {
  if (!j.is_object()) throw InputError("process matrix must be an object");
  std::vector<Wire> wires;
  if (!j.contains("wires") || !j["wires"].is_array()) throw InputError("missing \"wires\" array");
  for (const auto& w : j["wires"]) wires.push_back({field<std::string>(w, "name"), field<int>(w, "dim"), WireKind::system});
  Signature sig(wires);
  if (sig.dim() > 1u << 14) throw InputError("process matrix too large");
  const auto d = static_cast<Eigen::Index>(sig.dim());
  Mat m = Mat::Zero(d, d);
  if (!j.contains("entries") || !j["entries"].is_array()) throw InputError("missing \"entries\" array");
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() < 3 || e.size() > 4) throw InputError("entries are [row, col, re, im]");
    try {
      auto r = e[0].get<Eigen::Index>(), c = e[1].get<Eigen::Index>();
      if (r < 0 || c < 0 || r >= d || c >= d) throw InputError("entry index out of range");
      m(r, c) += cplx(e[2].get<double>(), e.size() == 4 ? e[3].get<double>() : 0.0);
    } catch (const json::exception& ex) {
      throw InputError(std::string("entry: ") + ex.what());
    }
  }
  ProcessMatrix pm;
  pm.w = LabeledOperator::square(sig, std::move(m));
  const json lay = j.value("layout", json::object());
  pm.layout.past = lay.value("past", "P");
  pm.layout.future = lay.value("future", "F");
  if (lay.contains("agents"))
    for (const auto& a : lay["agents"])
      pm.layout.agents.push_back({field<std::string>(a, "name"), field<std::string>(a, "in"), field<std::string>(a, "out")});
  for (const auto& n : {pm.layout.past, pm.layout.future})
    if (!sig.has(n)) throw InputError("layout names unknown wire " + n);
  for (const auto& a : pm.layout.agents)
    if (!sig.has(a.in) || !sig.has(a.out)) throw InputError("agent " + a.name + " names an unknown wire");
  return pm;
}

}  // namespace icausal::io
