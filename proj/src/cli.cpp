#include "segfib/cli.hpp"

#include "segfib/families.hpp"
#include "segfib/monoid.hpp"
#include "segfib/triangulation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <thread>

namespace segfib::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- JSON conversions -------------------------------------------------------

json to_json(const Integer& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return json(static_cast<long long>(x));
  return json(to_string(x));
}

json to_json(const Rational& x) { return json(to_string(x)); }

json to_json(const IntVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

json to_json(const std::vector<IntPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

json to_json(const IntMatrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(IntVector(m.row(i).transpose())));
  return a;
}

Integer integer_from(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw UsageError("expected an integer, got " + j.dump());
}

long long small_int(const json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number_integer())
    throw UsageError(std::string("family spec needs an integer \"") + key + "\"");
  return spec[key].get<long long>();
}

IntPoint point_from(const json& j) {
  if (!j.is_array()) throw UsageError("expected a coordinate array, got " + j.dump());
  IntPoint p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = integer_from(j[i]);
  return p;
}

std::vector<IntPoint> points_from(const json& j) {
  if (!j.is_array() || j.empty()) throw UsageError("expected a nonempty array of points");
  std::vector<IntPoint> out;
  for (const auto& p : j) {
    out.push_back(point_from(p));
    if (out.back().size() != out.front().size()) throw UsageError("points of different dimensions");
  }
  return out;
}

IntMatrix matrix_from(const json& j, Eigen::Index cols) {
  if (!j.is_array()) throw UsageError("expected a matrix");
  IntMatrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    IntPoint row = point_from(j[i]);
    if (row.size() != cols) throw UsageError("matrix row of the wrong length");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

json verdict_json(const Verdict& v) {
  json out{{"ok", v.ok}};
  if (!v.ok) out["detail"] = v.detail;
  return out;
}

json triangulation_json(const TriangulationComplex& t) {
  json out{{"vertices", to_json(t.vertices)}, {"simplices", t.simplices}};
  if (t.heights) {
    json h = json::array();
    for (const auto& x : *t.heights) h.push_back(to_json(x));
    out["heights"] = h;
  }
  return out;
}

TriangulationComplex triangulation_from(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("simplices"))
    throw UsageError("a triangulation needs \"vertices\" and \"simplices\"");
  TriangulationComplex t;
  t.vertices = points_from(j["vertices"]);
  for (const auto& s : j["simplices"]) {
    std::vector<int> cell;
    for (const auto& v : s) {
      if (!v.is_number_integer()) throw UsageError("simplex entries must be vertex indices");
      int i = v.get<int>();
      if (i < 0 || i >= static_cast<int>(t.vertices.size())) throw UsageError("vertex index out of range");
      cell.push_back(i);
    }
    std::sort(cell.begin(), cell.end());
    t.simplices.push_back(cell);
  }
  if (j.contains("heights")) {
    std::vector<Rational> h;
    for (const auto& x : j["heights"]) {
      if (x.is_number_integer())
        h.emplace_back(x.get<long long>());
      else if (x.is_string())
        h.push_back(parse_rational(x.get<std::string>()));
      else
        throw UsageError("heights must be integers or \"p/q\" strings");
    }
    t.heights = h;
  }
  return t;
}

// ---- instances ----------------------------------------------------------------

struct Instance {
  json family;  // the generating spec, if any
  std::optional<PointConfig> config;
  std::optional<LatticePolytope> polytope;
  std::optional<AffineMap> fibration;
  std::optional<LatticePolytope> base;
  std::vector<FamilyInstance> tower;  // iterated construction, when known
};

std::vector<NakajimaStep> cube_steps(long long d) {
  std::vector<NakajimaStep> steps;
  for (long long i = 0; i < d; ++i) {
    IntVector beta = IntVector::Zero(i + 1);
    beta[i] = 1;
    steps.push_back({IntVector::Zero(i + 1), beta});
  }
  return steps;
}

std::vector<NakajimaStep> nakajima_steps(const json& spec) {
  if (!spec.contains("steps") || !spec["steps"].is_array() || spec["steps"].empty())
    throw UsageError("nakajima spec needs a nonempty \"steps\" array");
  std::vector<NakajimaStep> steps;
  for (const auto& s : spec["steps"]) {
    if (!s.is_object() || !s.contains("alpha") || !s.contains("beta"))
      throw UsageError("each nakajima step needs \"alpha\" and \"beta\"");
    steps.push_back({point_from(s["alpha"]), point_from(s["beta"])});
  }
  return steps;
}

Instance generate_family(const json& spec) {
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string())
    throw UsageError("a family spec needs a \"family\" name");
  const std::string name = spec["family"].get<std::string>();
  Instance out;
  out.family = spec;
  FamilyInstance fi;
  if (name == "pm") {
    fi = make_pm(small_int(spec, "m"));
  } else if (name == "segment_polytope") {
    if (!spec.contains("intervals") || !spec["intervals"].is_array() || spec["intervals"].size() != 4)
      throw UsageError("segment_polytope spec needs four \"intervals\"");
    IntervalQuadruple q;
    for (int k = 0; k < 4; ++k) {
      const auto& iv = spec["intervals"][k];
      if (!iv.is_array() || iv.size() != 2) throw UsageError("each interval is [a, b]");
      q.intervals[k] = {integer_from(iv[0]), integer_from(iv[1])};
    }
    fi = make_segment_polytope(q);
  } else if (name == "cube") {
    long long d = small_int(spec, "d");
    if (d < 1 || d > 6) throw UsageError("cube dimension must be in 1..6");
    out.tower = make_nakajima_tower(cube_steps(d));
    fi = out.tower.back();
  } else if (name == "nakajima") {
    out.tower = make_nakajima_tower(nakajima_steps(spec));
    fi = out.tower.back();
  } else {
    throw UsageError("unknown family \"" + name + "\"");
  }
  out.polytope = fi.polytope;
  out.fibration = fi.fibration;
  out.base = fi.base;
  return out;
}

Instance instance_from(const json& j) {
  if (!j.is_object()) throw UsageError("input must be a JSON object");
  if (j.contains("vertices")) {
    Instance out;
    out.polytope = LatticePolytope::from_points(points_from(j["vertices"]));
    if (j.contains("fibration")) {
      const auto& f = j["fibration"];
      if (!f.contains("matrix") || !f.contains("offset")) throw UsageError("fibration needs \"matrix\" and \"offset\"");
      AffineMap map;
      map.matrix = matrix_from(f["matrix"], out.polytope->dim());
      map.offset = point_from(f["offset"]);
      if (map.offset.size() != map.matrix.rows()) throw UsageError("fibration offset of the wrong length");
      out.fibration = map;
    }
    if (j.contains("base")) {
      if (!j["base"].contains("vertices")) throw UsageError("base needs \"vertices\"");
      out.base = LatticePolytope::from_points(points_from(j["base"]["vertices"]));
    }
    if (j.contains("family")) {
      out.family = j["family"];
      // Recover the iterated construction when the spec still describes P.
      Instance regen = generate_family(j["family"]);
      if (regen.polytope->vertices() == out.polytope->vertices()) out.tower = regen.tower;
    }
    return out;
  }
  if (j.contains("family")) return generate_family(j);
  if (j.contains("points")) {
    Instance out;
    out.config = PointConfig(points_from(j["points"]));
    return out;
  }
  throw UsageError("input needs \"vertices\", \"points\" or a \"family\" spec");
}

json polytope_json(const Instance& inst) {
  json out;
  if (!inst.family.is_null()) out["family"] = inst.family;
  if (inst.polytope) {
    out["dim"] = inst.polytope->dim();
    out["vertices"] = to_json(inst.polytope->vertices());
  } else if (inst.config) {
    out["points"] = to_json(inst.config->points());
  }
  if (inst.fibration) out["fibration"] = {{"matrix", to_json(inst.fibration->matrix)}, {"offset", to_json(inst.fibration->offset)}};
  if (inst.base) out["base"] = {{"dim", inst.base->dim()}, {"vertices", to_json(inst.base->vertices())}};
  return out;
}

PointConfig config_of(const Instance& inst) {
  if (inst.polytope) return lattice_point_config(*inst.polytope);
  return *inst.config;
}

// ---- I/O ------------------------------------------------------------------------

json read_json(const std::string& source, std::istream& in) {
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else if (!source.empty() && (source.front() == '{' || source.front() == '[')) {
    text = source;
  } else {
    std::ifstream file(source);
    if (!file) throw UsageError("cannot read " + source);
    text.assign(std::istreambuf_iterator<char>(file), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

void write_json(const std::string& target, std::ostream& out, const json& j) {
  if (target == "-") {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream file(target);
  if (!file) throw UsageError("cannot write " + target);
  file << j.dump(2) << "\n";
}

std::vector<std::string> split_tasks(const std::string& text, const std::vector<std::string>& allowed) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (std::find(allowed.begin(), allowed.end(), item) == allowed.end()) throw UsageError("unknown task \"" + item + "\"");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("at least one task is required");
  return out;
}

struct Options {
  std::string input = "-";
  std::string output = "-";
  std::string format = "json";
  std::string tasks;
  std::string base;
  std::string polytope;
  int kmax = 64;
  int jobs = 1;
  double budget = 0;
  std::optional<std::uint64_t> seed;
};

Deadline deadline_of(const Options& o) {
  if (o.budget <= 0) return std::nullopt;
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(o.budget));
}

bool expired(const Deadline& d) { return d && std::chrono::steady_clock::now() >= *d; }

// ---- reports --------------------------------------------------------------------

json gaps_json(const GapReport& r) {
  json gv = json::array();
  for (const auto& x : r.gap_vector) gv.push_back(to_json(x));
  json wit = json::array();
  for (const auto& w : r.witnesses) wit.push_back({{"height", w.height}, {"point", to_json(w.point)}});
  return {{"gap_vector", gv},  {"gamma", r.gamma},         {"stop_height", r.stop_height},
          {"capped", r.capped}, {"timed_out", r.timed_out}, {"witnesses", wit}};
}

struct Unimodality {
  bool unimodal = true;
  std::optional<int> peak;  // smallest j with gv_j maximal, 1-based
};

Unimodality unimodality(const std::vector<Integer>& gv) {
  Unimodality out;
  if (gv.empty()) return out;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < gv.size(); ++i)
    if (gv[i] > gv[peak]) peak = i;
  out.peak = static_cast<int>(peak) + 1;
  for (std::size_t i = 1; i <= peak; ++i)
    if (gv[i] < gv[i - 1]) out.unimodal = false;
  for (std::size_t i = peak + 1; i < gv.size(); ++i)
    if (gv[i] > gv[i - 1]) out.unimodal = false;
  return out;
}

TriangulationComplex resolve_base(const Instance& inst, const Options& o, std::istream& in) {
  if (o.base == "main" || o.base == "anti") return square_triangulation(o.base == "main");
  if (!o.base.empty()) return triangulation_from(read_json(o.base, in));
  if (!inst.tower.empty()) {
    if (inst.tower.size() == 1) return point_triangulation();
    PiOptions quiet;
    quiet.certify_regularity = false;
    return tower_triangulations(std::vector<FamilyInstance>(inst.tower.begin(), inst.tower.end() - 1), quiet).back();
  }
  if (inst.base && inst.base->vertices() == unit_cube(2).vertices()) return square_triangulation(true);
  throw UsageError("no base triangulation known for this input; pass --base");
}

struct Certified {
  json report;
  bool ok = true;
  std::string first_failure;
};

Certified certify(const TriangulationComplex& t, const LatticePolytope& p, const std::optional<AffineMap>& f,
                  const std::optional<TriangulationComplex>& base, const std::vector<std::string>& tasks) {
  Certified out;
  out.report = json::object();
  for (const auto& task : tasks) {
    Verdict v;
    if (task == "unimodular") {
      v = is_unimodular_triangulation(t);
    } else if (task == "flag") {
      v = is_flag(t);
    } else if (task == "regular") {
      if (t.heights) {
        v = check_heights(t, *t.heights);
      } else {
        RegularityResult r = is_regular(t);
        v = r.regular ? Verdict{} : Verdict::fail(r.detail);
      }
    } else if (task == "verify") {
      v = verify_complex(t, p);
    } else if (task == "refines") {
      if (!f || !base) {
        v = Verdict::fail("refines needs a fibration and a base triangulation");
      } else {
        try {
          v = refines(t, fibered_subdivision(*f, p, *base));
        } catch (const GeometryError& e) {
          v = Verdict::fail(e.what());
        }
      }
    }
    out.report[task] = verdict_json(v);
    if (!v.ok && out.ok) {
      out.ok = false;
      out.first_failure = task + ": " + v.detail;
    }
  }
  return out;
}

const std::vector<std::string> kCertificates{"unimodular", "flag", "regular", "verify", "refines"};

json compatibility_json(const CompatibilityError& e) {
  return {{"error", "face_compatibility"}, {"face", to_json(e.face())}, {"image", to_json(e.image())}, {"message", e.what()}};
}

// ---- subcommands ----------------------------------------------------------------

int cmd_generate(const Options& o, std::istream& in, std::ostream& out) {
  json spec = read_json(o.input, in);
  Instance inst = generate_family(spec);
  write_json(o.output, out, polytope_json(inst));
  return kOk;
}

int cmd_triangulate(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Instance inst = instance_from(read_json(o.input, in));
  if (!inst.polytope || !inst.fibration) throw UsageError("triangulate needs a polytope with a fibration");
  if (!inst.base) throw UsageError("triangulate needs the base polytope");
  TriangulationComplex base = resolve_base(inst, o, in);
  PiOptions opt;
  opt.seed = o.seed;
  TriangulationComplex t;
  try {
    t = build_pi_triangulation(*inst.fibration, *inst.polytope, base, opt);
  } catch (const CompatibilityError& e) {
    json report = compatibility_json(e);
    report["instance"] = polytope_json(inst);
    write_json(o.output, out, report);
    err << e.what() << "\n";
    return kVerificationFailed;
  }
  Certified c = certify(t, *inst.polytope, inst.fibration, base, kCertificates);
  json report{{"instance", polytope_json(inst)},
              {"base_triangulation", triangulation_json(base)},
              {"triangulation", triangulation_json(t)},
              {"simplex_count", t.simplices.size()},
              {"normalized_volume", to_json(inst.polytope->normalized_volume())},
              {"certificates", c.report}};
  write_json(o.output, out, report);
  if (!c.ok) {
    err << "certificate failed: " << c.first_failure << "\n";
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_verify(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  json j = read_json(o.input, in);
  TriangulationComplex t = triangulation_from(j.contains("triangulation") ? j["triangulation"] : j);
  std::optional<Instance> inst;
  if (!o.polytope.empty())
    inst = instance_from(read_json(o.polytope, in));
  else if (j.contains("instance"))
    inst = instance_from(j["instance"]);
  std::optional<TriangulationComplex> base;
  if (j.contains("base_triangulation")) base = triangulation_from(j["base_triangulation"]);
  LatticePolytope p = inst && inst->polytope ? *inst->polytope : LatticePolytope::from_points(t.vertices);
  std::optional<AffineMap> f = inst ? inst->fibration : std::nullopt;

  std::vector<std::string> tasks;
  if (!o.tasks.empty()) {
    tasks = split_tasks(o.tasks, kCertificates);
  } else {
    tasks = {"unimodular", "flag", "regular", "verify"};
    if (f && base) tasks.push_back("refines");
  }
  Certified c = certify(t, p, f, base, tasks);
  write_json(o.output, out, json{{"certificates", c.report}});
  if (!c.ok) {
    err << "certificate failed: " << c.first_failure << "\n";
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_analyze(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> allowed{"gaps",      "very_ample",  "smooth", "ehrhart",
                                                "integrally_closed", "triangulate", "verify"};
  const auto tasks = split_tasks(o.tasks.empty() ? "gaps" : o.tasks, allowed);
  Instance inst = instance_from(read_json(o.input, in));
  const Deadline deadline = deadline_of(o);
  const PointConfig config = config_of(inst);
  auto polytope = [&]() -> LatticePolytope {
    if (inst.polytope) return *inst.polytope;
    return LatticePolytope::from_points(config.points());
  };

  json results = json::object();
  int code = kOk;
  std::optional<json> triangulated;
  for (const auto& task : tasks) {
    if (task != "gaps" && expired(deadline)) {
      results[task] = {{"skipped", "time budget exhausted"}};
      continue;
    }
    try {
      if (task == "gaps") {
        results[task] = gaps_json(gap_vector(config, GapOptions{o.kmax, deadline}));
      } else if (task == "very_ample") {
        VeryAmpleResult r = is_very_ample(config);
        json cert = json::array();
        for (const auto& vc : r.certificate) {
          json missing = json::array();
          for (const auto& e : vc.expressions)
            if (!e.representable) missing.push_back(to_json(e.element));
          cert.push_back({{"vertex", to_json(vc.vertex)}, {"hilbert_basis", to_json(vc.hilbert_basis)}, {"unrepresented", missing}});
        }
        results[task] = {{"very_ample", r.very_ample}, {"certificate", cert}};
      } else if (task == "smooth") {
        results[task] = {{"smooth", is_smooth(polytope())}};
      } else if (task == "ehrhart") {
        json coeffs = json::array();
        for (const auto& c : ehrhart_polynomial(polytope()).coefficients) coeffs.push_back(to_json(c));
        results[task] = {{"coefficients", coeffs}};
      } else if (task == "integrally_closed") {
        ClosednessResult r = is_integrally_closed(config, o.kmax);
        results[task] = {{"integrally_closed", r.integrally_closed}};
        if (r.first_failure_height) results[task]["first_failure_height"] = *r.first_failure_height;
      } else {
        if (!triangulated) {
          if (!inst.polytope || !inst.fibration || !inst.base) throw UsageError("needs a polytope with a fibration");
          TriangulationComplex base = resolve_base(inst, o, in);
          try {
            TriangulationComplex t = build_pi_triangulation(*inst.fibration, *inst.polytope, base);
            Certified c = certify(t, *inst.polytope, inst.fibration, base, kCertificates);
            triangulated = json{{"triangulation", triangulation_json(t)}, {"certificates", c.report}, {"ok", c.ok}};
            if (!c.ok) err << "certificate failed: " << c.first_failure << "\n";
          } catch (const CompatibilityError& e) {
            triangulated = compatibility_json(e);
            (*triangulated)["ok"] = false;
            err << e.what() << "\n";
          }
        }
        if (!(*triangulated)["ok"].get<bool>()) code = kVerificationFailed;
        if (task == "triangulate") {
          results[task] = *triangulated;
        } else {
          json v = *triangulated;
          v.erase("triangulation");
          results[task] = v;
        }
      }
    } catch (const GeometryError& e) {
      results[task] = {{"error", e.what()}};
    } catch (const UsageError& e) {
      results[task] = {{"error", e.what()}};
    }
  }
  write_json(o.output, out, json{{"input", polytope_json(inst)}, {"results", results}});
  return code;
}

std::string padded(long long x, int width) {
  std::string s = std::to_string(x);
  return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
}

int cmd_corpus(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  json spec = read_json(o.input, in);
  if (!spec.is_object() || !spec.contains("family")) throw UsageError("corpus spec needs a \"family\"");
  const std::string family = spec["family"].is_string() ? spec["family"].get<std::string>() : "";
  std::vector<std::pair<std::string, json>> items;
  if (family == "pm") {
    if (!spec.contains("m") || !spec["m"].is_array() || spec["m"].size() != 2) throw UsageError("pm corpus needs \"m\": [lo, hi]");
    long long lo = spec["m"][0].get<long long>(), hi = spec["m"][1].get<long long>();
    if (hi - lo > 1000) throw UsageError("range too large");
    for (long long m = std::max(0LL, lo); m <= hi; ++m) items.push_back({"pm/m=" + padded(m, 4), {{"family", "pm"}, {"m", m}}});
  } else if (family == "segment_polytope") {
    long long top = spec.contains("endpoint_max") ? spec["endpoint_max"].get<long long>() : 3;
    if (top > 12) throw UsageError("endpoint_max too large");
    std::vector<std::pair<long long, long long>> iv;
    for (long long a = 0; a <= top; ++a)
      for (long long b = a + 1; b <= top; ++b) iv.push_back({a, b});
    for (const auto& i1 : iv)
      for (const auto& i2 : iv)
        for (const auto& i3 : iv)
          for (const auto& i4 : iv) {
            std::string key = "segment_polytope/";
            json ints = json::array();
            for (const auto& [a, b] : {i1, i2, i3, i4}) {
              key += padded(a, 2) + padded(b, 2);
              ints.push_back({a, b});
            }
            items.push_back({key, {{"family", "segment_polytope"}, {"intervals", ints}}});
          }
  } else if (family == "list") {
    if (!spec.contains("instances") || !spec["instances"].is_array()) throw UsageError("list corpus needs \"instances\"");
    for (std::size_t i = 0; i < spec["instances"].size(); ++i)
      items.push_back({"list/" + padded(static_cast<long long>(i), 6), spec["instances"][i]});
  } else {
    throw UsageError("unknown corpus family \"" + family + "\"");
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // Specs are validated up front so that usage errors are not hidden in workers.
  for (const auto& item : items) generate_family(item.second);

  const Deadline deadline = deadline_of(o);
  std::vector<json> results(items.size());
  std::vector<std::vector<Integer>> vectors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      json r{{"key", items[i].first}, {"spec", items[i].second}};
      if (expired(deadline)) {
        r["skipped"] = "time budget exhausted";
      } else {
        try {
          Instance inst = generate_family(items[i].second);
          GapReport g = gap_vector(config_of(inst), GapOptions{o.kmax, deadline});
          json gv = json::array();
          for (const auto& x : g.gap_vector) gv.push_back(to_json(x));
          r["gap_vector"] = gv;
          r["gamma"] = g.gamma;
          r["capped"] = g.capped || g.timed_out;
          vectors[i] = g.gap_vector;
        } catch (const std::exception& e) {
          r["error"] = e.what();
        }
      }
      results[i] = r;
    }
  };
  const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json instances = json::array();
  json witnesses = json::array();
  long long unimodal = 0, non_unimodal = 0, capped = 0, skipped = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    json r = results[i];
    if (!r.contains("gap_vector")) {
      ++skipped;
    } else if (r["capped"].get<bool>()) {
      ++capped;
      r["unimodal"] = nullptr;
    } else {
      Unimodality u = unimodality(vectors[i]);
      r["unimodal"] = u.unimodal;
      r["peak"] = u.peak ? json(*u.peak) : json(nullptr);
      if (u.unimodal) {
        ++unimodal;
      } else {
        ++non_unimodal;
        // Replay once before reporting.
        GapReport again = gap_vector(config_of(generate_family(items[i].second)), GapOptions{o.kmax, std::nullopt});
        bool confirmed = !unimodality(again.gap_vector).unimodal && again.gap_vector == vectors[i];
        witnesses.push_back({{"key", items[i].first}, {"spec", items[i].second}, {"gap_vector", r["gap_vector"]}, {"replayed", confirmed}});
        err << "non-unimodal gap vector: " << items[i].first << "\n";
      }
    }
    instances.push_back(r);
  }
  json report{{"instances", instances},
              {"counts",
               {{"instances", items.size()},
                {"unimodal", unimodal},
                {"non_unimodal", non_unimodal},
                {"capped", capped},
                {"skipped", skipped}}},
              {"witnesses", witnesses}};
  write_json(o.output, out, report);
  return non_unimodal > 0 ? kVerificationFailed : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"segfib: normality invariants and fibration triangulations of lattice polytopes"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", o.input, "input JSON: file path, inline object, or - for stdin");
    sub->add_option("-o,--output", o.output, "output file, or - for stdout");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json"}));
  };
  auto* generate = app.add_subcommand("generate", "write a family member with its fibration");
  common(generate);
  auto* analyze = app.add_subcommand("analyze", "compute invariants");
  common(analyze);
  analyze->add_option("--tasks", o.tasks, "comma list: gaps,very_ample,smooth,ehrhart,integrally_closed,triangulate,verify");
  analyze->add_option("--kmax", o.kmax, "largest height scanned")->check(CLI::PositiveNumber);
  analyze->add_option("--time-budget", o.budget, "soft wall-clock cap in seconds")->check(CLI::PositiveNumber);
  analyze->add_option("--base", o.base, "base triangulation: main, anti, or a JSON source");
  auto* triangulate = app.add_subcommand("triangulate", "build and certify the fibration triangulation");
  common(triangulate);
  triangulate->add_option("--base", o.base, "base triangulation: main, anti, or a JSON source");
  auto* seed_opt = triangulate->add_option("--seed", seed, "random valid enumeration order");
  auto* verify = app.add_subcommand("verify", "check certificates of a triangulation");
  common(verify);
  verify->add_option("--polytope", o.polytope, "polytope JSON source (default: hull of the vertices)");
  verify->add_option("--tasks", o.tasks, "comma list: unimodular,flag,regular,verify,refines");
  auto* corpus = app.add_subcommand("corpus", "gap vectors and unimodality over a family range");
  common(corpus);
  corpus->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  corpus->add_option("--kmax", o.kmax, "largest height scanned")->check(CLI::PositiveNumber);
  corpus->add_option("--time-budget", o.budget, "soft wall-clock cap in seconds")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }
  if (*seed_opt) o.seed = seed;

  try {
    if (generate->parsed()) return cmd_generate(o, in, out);
    if (analyze->parsed()) return cmd_analyze(o, in, out, err);
    if (triangulate->parsed()) return cmd_triangulate(o, in, out, err);
    if (verify->parsed()) return cmd_verify(o, in, out, err);
    if (corpus->parsed()) return cmd_corpus(o, in, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const FamilyError& e) {
    err << "invalid family spec: " << e.what() << "\n";
    return kUsageError;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsageError;
  } catch (const GeometryError& e) {
    err << "invalid geometry: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace segfib::cli
