#include "heatfock/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace heatfock {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& why) { throw ConfigError("config: " + why); }

cplx read_complex(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(where + ": expected a number or [re, im]");
}

json write_complex(cplx z) { return json::array({z.real(), z.imag()}); }

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(std::string(key) + " required" + (where.empty() ? "" : " in " + where));
  return obj.at(key);
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) fail("unknown key '" + key + "'" + (where.empty() ? "" : " in " + where));
  }
}

int read_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + ": expected an integer");
  return v.get<int>();
}

double read_real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

CVector read_vector(const json& v, int size, const std::string& where) {
  if (!v.is_array() || int(v.size()) != size) {
    fail(where + ": expected " + std::to_string(size) + " entries");
  }
  CVector out(size);
  for (int i = 0; i < size; ++i) out(i) = read_complex(v[i], where);
  return out;
}

ConfigPtr read_group(const json& g) {
  if (!g.is_object()) fail("group must be an object");
  reject_unknown(g, {"k", "d", "omega", "degree_cap"}, "group");
  const int k = read_int(require(g, "k", "group"), "group.k");
  const int d = read_int(require(g, "d", "group"), "group.d");
  if (!g.contains("omega")) fail("omega required");
  const json& om = g.at("omega");
  if (!om.is_array() || int(om.size()) != d) fail("omega: expected d = " + std::to_string(d) + " matrices");
  std::vector<CMatrix> omega;
  for (int m = 0; m < d; ++m) {
    const std::string where = "omega[" + std::to_string(m) + "]";
    if (!om[m].is_array() || int(om[m].size()) != k) fail(where + ": expected k rows");
    CMatrix mat(k, k);
    for (int i = 0; i < k; ++i) mat.row(i) = read_vector(om[m][i], k, where).transpose();
    omega.push_back(std::move(mat));
  }
  const int cap = g.contains("degree_cap") ? read_int(g.at("degree_cap"), "group.degree_cap")
                                           : GroupConfig::kDefaultDegreeCap;
  return make_config(GroupConfig(k, d, std::move(omega), cap));
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json canonical(const ExperimentConfig& cfg) {
  json group;
  group["k"] = cfg.group->k();
  group["d"] = cfg.group->d();
  group["degree_cap"] = cfg.group->degree_cap();
  json omega = json::array();
  for (const auto& mat : cfg.group->omega()) {
    json rows = json::array();
    for (int i = 0; i < mat.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < mat.cols(); ++j) row.push_back(write_complex(mat(i, j)));
      rows.push_back(row);
    }
    omega.push_back(rows);
  }
  group["omega"] = omega;
  json points = json::array();
  for (const auto& h : cfg.points) {
    json w = json::array(), c = json::array();
    for (int j = 0; j < h.w.size(); ++j) w.push_back(write_complex(h.w(j)));
    for (int j = 0; j < h.c.size(); ++j) c.push_back(write_complex(h.c(j)));
    points.push_back({{"w", w}, {"c", c}});
  }
  json out;
  out["group"] = group;
  out["T"] = cfg.T;
  out["mc"] = {{"steps", cfg.mc.steps}, {"paths", cfg.mc.paths}, {"seed", cfg.mc.seed}};
  out["polynomials"] = cfg.polynomial_texts;
  out["points"] = points;
  out["ranks"] = cfg.ranks;
  out["p"] = cfg.p;
  out["suite"] = {{"path_scale", cfg.path_scale}};
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line
    // L, column C: " prefix in favour of our own position.
    const auto colon = what.find(": ", what.find("parse error"));
    if (colon != std::string::npos) what = what.substr(colon + 2);
    fail("parse error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + what);
  }
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown(doc, {"group", "T", "mc", "polynomials", "points", "ranks", "p", "suite"}, "");

  ExperimentConfig cfg;
  cfg.group = read_group(require(doc, "group", ""));
  if (doc.contains("T")) cfg.T = read_real(doc.at("T"), "T");
  if (!(cfg.T > 0.0)) fail("T must be positive");
  cfg.mc.T = cfg.T;
  if (doc.contains("mc")) {
    const json& mc = doc.at("mc");
    if (!mc.is_object()) fail("mc must be an object");
    reject_unknown(mc, {"steps", "paths", "seed"}, "mc");
    if (mc.contains("steps")) cfg.mc.steps = read_int(mc.at("steps"), "mc.steps");
    if (mc.contains("paths")) {
      if (!mc.at("paths").is_number_integer()) fail("mc.paths: expected an integer");
      cfg.mc.paths = mc.at("paths").get<long>();
    }
    if (mc.contains("seed")) {
      if (!mc.at("seed").is_number_unsigned()) fail("mc.seed: expected a non-negative integer");
      cfg.mc.seed = mc.at("seed").get<std::uint64_t>();
    }
  }
  try {
    cfg.mc.validate();
  } catch (const std::exception& e) {
    fail(std::string("mc: ") + e.what());
  }

  if (doc.contains("polynomials")) {
    const json& polys = doc.at("polynomials");
    if (!polys.is_array()) fail("polynomials must be a list of strings");
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (!polys[i].is_string()) fail("polynomials[" + std::to_string(i) + "]: expected a string");
      const std::string literal = polys[i].get<std::string>();
      try {
        cfg.polynomials.push_back(parse_polynomial(literal, cfg.group));
      } catch (const std::exception& e) {
        fail("polynomials[" + std::to_string(i) + "]: " + e.what());
      }
      cfg.polynomial_texts.push_back(literal);
    }
  }
  if (doc.contains("points")) {
    const json& pts = doc.at("points");
    if (!pts.is_array()) fail("points must be a list");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string where = "points[" + std::to_string(i) + "]";
      if (!pts[i].is_object()) fail(where + ": expected {\"w\": [...], \"c\": [...]}");
      reject_unknown(pts[i], {"w", "c"}, where);
      GroupElement h = cfg.group->identity();
      if (pts[i].contains("w")) h.w = read_vector(pts[i].at("w"), cfg.group->k(), where + ".w");
      if (pts[i].contains("c")) h.c = read_vector(pts[i].at("c"), cfg.group->d(), where + ".c");
      cfg.points.push_back(h);
    }
  }
  if (doc.contains("ranks")) {
    const json& ranks = doc.at("ranks");
    if (!ranks.is_array()) fail("ranks must be a list");
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      const int n = read_int(ranks[i], "ranks[" + std::to_string(i) + "]");
      if (n < 0 || n > cfg.group->k() || (!cfg.ranks.empty() && n <= cfg.ranks.back())) {
        fail("ranks must increase within [0, k]");
      }
      cfg.ranks.push_back(n);
    }
  } else {
    for (int n = 1; n <= cfg.group->k(); ++n) cfg.ranks.push_back(n);
  }
  if (doc.contains("p")) {
    const json& ps = doc.at("p");
    if (!ps.is_array()) fail("p must be a list");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double p = read_real(ps[i], "p[" + std::to_string(i) + "]");
      if (!(p > 1.0)) fail("p exponents must exceed 1");
      cfg.p.push_back(p);
    }
  } else {
    cfg.p = {2.0};
  }
  if (doc.contains("suite")) {
    const json& suite = doc.at("suite");
    if (!suite.is_object()) fail("suite must be an object");
    reject_unknown(suite, {"path_scale"}, "suite");
    if (suite.contains("path_scale")) {
      cfg.path_scale = read_real(suite.at("path_scale"), "suite.path_scale");
      if (!(cfg.path_scale > 0.0)) fail("suite.path_scale must be positive");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json tensor_json(const FockTensor& alpha) {
  json entries = json::array();
  for (int r = 0; r <= alpha.maxrank(); ++r) {
    for (const auto& [word, value] : alpha.component(r)) {
      entries.push_back({{"rank", r}, {"word", word}, {"value", write_complex(value)}});
    }
  }
  json doc = {{"k", alpha.config()->k()},
              {"d", alpha.config()->d()},
              {"maxrank", alpha.maxrank()},
              {"entries", entries}};
  return doc;
}

}  // namespace

std::string tensor_to_json(const FockTensor& alpha) { return tensor_json(alpha).dump(2) + "\n"; }

std::string tensors_to_json(const std::vector<std::string>& labels,
                            const std::vector<FockTensor>& tensors, const std::string& hash) {
  json arr = json::array();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    arr.push_back({{"polynomial", labels.at(i)}, {"tensor", tensor_json(tensors[i])}});
  }
  return json({{"config_hash", hash}, {"tensors", arr}}).dump(2) + "\n";
}

void write_tensors_csv(std::ostream& out, const std::vector<std::string>& labels,
                       const std::vector<FockTensor>& tensors) {
  out << "polynomial,rank,word,re,im\n";
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    for (int r = 0; r <= tensors[i].maxrank(); ++r) {
      for (const auto& [word, value] : tensors[i].component(r)) {
        out << '"' << labels.at(i) << "\"," << r << ',';
        for (std::size_t j = 0; j < word.size(); ++j) out << (j ? " " : "") << word[j];
        out << ',' << format_number(value.real()) << ',' << format_number(value.imag()) << '\n';
      }
    }
  }
}

FockTensor tensor_from_json(const std::string& text, const ConfigPtr& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("tensor: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("tensor: top level must be an object");
  if (doc.value("k", -1) != cfg->k() || doc.value("d", -1) != cfg->d()) {
    throw ConfigError("tensor: k and d do not match the group");
  }
  FockTensor out(cfg, doc.value("maxrank", 0));
  for (const auto& e : doc.value("entries", json::array())) {
    const Word word = e.at("word").get<Word>();
    if (e.value("rank", -1) != int(word.size())) throw ConfigError("tensor: rank does not match word");
    out.add(word, read_complex(e.at("value"), "tensor entry"));
  }
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_target(cplx z) {
  if (z.imag() == 0.0) return format_number(z.real());
  std::string im = format_number(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_number(z.real()) + im + "i";
}

const char* const kCsvHeader =
    "experiment,config_hash,T,steps,paths,seed,target,estimate_re,estimate_im,stderr,pass";

void write_rows_csv(std::ostream& out, const std::vector<CheckRow>& rows,
                    const std::string& hash) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << hash << ',' << format_number(r.T) << ',' << r.steps << ','
        << r.paths << ',' << r.seed << ',' << format_target(r.target) << ','
        << format_number(r.estimate.real()) << ',' << format_number(r.estimate.imag()) << ','
        << format_number(r.stderr) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_rows_json(std::ostream& out, const std::vector<CheckRow>& rows,
                     const std::string& hash) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"experiment", r.experiment},
                   {"config_hash", hash},
                   {"T", r.T},
                   {"steps", r.steps},
                   {"paths", r.paths},
                   {"seed", r.seed},
                   {"target", write_complex(r.target)},
                   {"estimate", write_complex(r.estimate)},
                   {"stderr", r.stderr},
                   {"pass", r.pass}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace heatfock
