#include "davis/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "davis/hashing.hpp"

namespace davis {

namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader = "#! ";

std::string join_counts(const std::map<int, int>& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [size, n] : m) {
    os << (first ? "" : ",") << n << 'x' << size;
    first = false;
  }
  return os.str();
}

void print_gates(const std::vector<Gate>& gates, std::ostream& log) {
  for (const auto& g : gates) log << (g.ok ? "PASS " : "FAIL ") << g.name << ": " << g.detail << '\n';
}

bool all_ok(const std::vector<Gate>& gates) {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.ok; });
}

std::uint64_t seed_of(const StageFile& geometry) {
  const auto s = geometry.field("orientation_seed");
  if (!s) throw StaleInput("geometry.txt has no orientation_seed");
  return std::stoull(*s);
}

struct Loaded {
  StageFile file;
  std::string sha;
};

Loaded load_stage(const fs::path& dir, const char* name, const char* kind) {
  const fs::path path = dir / name;
  const std::string text = read_text(path);
  Loaded out{StageFile::parse(text), sha256_hex(text)};
  if (out.file.kind != kind) throw StaleInput(std::string(name) + " is not a " + kind + " file");
  check_inputs(dir, out.file);
  return out;
}

/// Geometry rebuilt from geometry.txt; throws StaleInput if the file does not
/// match a fresh build.
struct Rebuilt {
  Geometry geo;
  SurfaceModel model;
  std::uint64_t seed = 0;
  std::string sha;
};

Rebuilt rebuild(const fs::path& dir) {
  const Loaded g = load_stage(dir, files::kGeometry, "geometry");
  Rebuilt r;
  r.seed = seed_of(g.file);
  r.geo = build_geometry();
  r.model = build_surfaces(r.geo, orientation_from_seed(r.seed));
  if (geometry_body(r.geo, r.model, r.seed) != g.file.body) {
    throw StaleInput("geometry.txt differs from a fresh build");
  }
  r.sha = g.sha;
  return r;
}

struct LoadedMatrices {
  IntersectionData data;
  std::vector<std::pair<std::string, std::string>> shas;
};

LoadedMatrices load_matrices(const fs::path& dir) {
  LoadedMatrices out;
  const std::pair<const char*, const char*> names[] = {
      {files::kMatrixQ, "Q"}, {files::kMatrixMb, "Mb"}, {files::kMatrixMB, "MB"}};
  for (const auto& [file, name] : names) {
    const Loaded m = load_stage(dir, file, "matrix");
    IntMatrix mat = parse_matrix(m.file.body, name);
    if (std::string(name) == "Q") out.data.Q = std::move(mat);
    else if (std::string(name) == "Mb") out.data.Mb = std::move(mat);
    else out.data.MB = std::move(mat);
    out.shas.emplace_back(file, m.sha);
  }
  return out;
}

std::string describe_histogram(const std::map<long long, long long>& h) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, n] : h) {
    os << (first ? "" : " ") << v << ':' << n;
    first = false;
  }
  return first ? "(empty)" : os.str();
}

bool in_expected_set(long long v) {
  const long long a = std::llabs(v);
  return a == 0 || a == 8 || a == 16 || a == 24 || a == 32;
}

void print_report(const SearchReport& r, std::ostream& log) {
  log << "nodes " << r.nodes << ", pruned by bound " << r.pruned_bound << ", pruned by minimality "
      << r.pruned_minimality << '\n';
  log << "minimal admissible vectors " << r.vectors.size() << '\n';
  log << "Q(x,x) histogram " << describe_histogram(r.histogram) << '\n';
  log << "|Q(x,x)| histogram " << describe_histogram(r.abs_histogram()) << '\n';
  log << "max |Q(x,x)| " << r.max_abs << '\n';
  const bool expected = std::all_of(r.histogram.begin(), r.histogram.end(),
                                    [](const auto& kv) { return in_expected_set(kv.first); });
  log << "all |Q(x,x)| in {0, 8, 16, 24, 32}: " << (expected ? "yes" : "no") << '\n';
}

}  // namespace

std::string StageFile::render() const {
  std::ostringstream os;
  os << kHeader << "davis " << kind << '\n';
  for (const auto& [name, sha] : inputs) os << kHeader << "input " << name << ' ' << sha << '\n';
  for (const auto& [key, value] : fields) os << kHeader << key << ' ' << value << '\n';
  os << body;
  return os.str();
}

StageFile StageFile::parse(const std::string& text) {
  StageFile f;
  std::istringstream is(text);
  std::string line;
  std::size_t consumed = 0;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.rfind(kHeader, 0) != 0) break;
    consumed += line.size() + 1;
    std::istringstream ls(line.substr(3));
    std::string key;
    ls >> key;
    if (first) {
      if (key != "davis" || !(ls >> f.kind)) throw StaleInput("missing stage header");
      first = false;
      continue;
    }
    if (key == "input") {
      std::string name;
      std::string sha;
      if (!(ls >> name >> sha)) throw StaleInput("malformed input line");
      f.inputs.emplace_back(name, sha);
    } else {
      std::string value;
      std::getline(ls >> std::ws, value);
      f.fields.emplace_back(key, value);
    }
  }
  if (first) throw StaleInput("missing stage header");
  f.body = text.substr(std::min(consumed, text.size()));
  return f;
}

std::optional<std::string> StageFile::field(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StaleInput("missing input " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string file_sha256(const fs::path& path) { return sha256_hex(read_text(path)); }

void check_inputs(const fs::path& dir, const StageFile& file) {
  for (const auto& [name, sha] : file.inputs) {
    const fs::path p = dir / name;
    if (!fs::exists(p)) throw StaleInput("missing input " + name);
    if (file_sha256(p) != sha) throw StaleInput(name + " changed since this " + file.kind + " file was written");
  }
}

OrientationChoice orientation_from_seed(std::uint64_t seed) {
  OrientationChoice c;
  if (seed == 0) return c;
  std::mt19937_64 rng(seed);
  auto fill = [&](std::vector<bool>& v, int n) {
    v.resize(n);
    for (int i = 0; i < n; ++i) v[i] = (rng() & 1U) != 0;
  };
  fill(c.circle, kDimension);
  fill(c.cone, kConeClassCount);
  fill(c.pentagon, kPentagonClassCount);
  return c;
}

std::string geometry_body(const Geometry& geo, const SurfaceModel& model, std::uint64_t seed) {
  std::ostringstream os;
  const OrbitSummary orbits = quotient_orbits(geo.pairing, geo.lattice);
  int adjacencies = 0;
  for (const auto& n : geo.graph.neighbors) adjacencies += static_cast<int>(n.size());
  os << "facets " << geo.graph.size() << '\n';
  os << "adjacencies " << adjacencies / 2 << '\n';
  os << "ridges " << geo.lattice.ridges.size() << '\n';
  os << "edges " << geo.lattice.edges.size() << '\n';
  os << "vertices " << geo.lattice.vertices.size() << '\n';
  os << "orbits ridges " << join_counts(orbits.ridge_orbit_sizes) << " edges "
     << join_counts(orbits.edge_orbit_sizes) << " vertices " << join_counts(orbits.vertex_orbit_sizes) << '\n';
  os << "euler " << orbits.euler_characteristic() << '\n';
  os << "orientation_seed " << seed << '\n';
  for (int i = 0; i < geo.graph.size(); ++i) {
    os << "center " << i;
    for (int k = 0; k < 4; ++k) os << ' ' << geo.graph.centers[i](k).str();
    os << '\n';
  }
  for (std::size_t i = 0; i < model.circles.size(); ++i) {
    os << "circle " << i;
    for (int f : model.circles[i].facets) os << ' ' << f;
    os << '\n';
  }
  return os.str();
}

std::vector<Gate> geometry_gates(const Geometry& geo) {
  std::vector<Gate> gates;
  auto add = [&](std::string name, bool ok, std::string detail) {
    gates.push_back({std::move(name), ok, std::move(detail)});
  };
  int adjacencies = 0;
  bool regular = true;
  for (const auto& n : geo.graph.neighbors) {
    adjacencies += static_cast<int>(n.size());
    regular = regular && n.size() == 12;
  }
  adjacencies /= 2;
  add("group order", geo.graph.size() == 120, std::to_string(geo.graph.size()) + " unit quaternions");
  add("facet graph", regular && adjacencies == 720, "12-regular: " + std::string(regular ? "yes" : "no") +
                                                      ", adjacencies " + std::to_string(adjacencies));
  add("faces", geo.lattice.ridges.size() == 720 && geo.lattice.edges.size() == 1200 &&
                   geo.lattice.vertices.size() == 600,
      std::to_string(geo.lattice.ridges.size()) + " ridges, " + std::to_string(geo.lattice.edges.size()) +
          " edges, " + std::to_string(geo.lattice.vertices.size()) + " vertices");
  const OrbitSummary o = quotient_orbits(geo.pairing, geo.lattice);
  add("pairing orbits", o.matches_davis(),
      "ridges " + join_counts(o.ridge_orbit_sizes) + ", edges " + join_counts(o.edge_orbit_sizes) + ", vertices " +
          join_counts(o.vertex_orbit_sizes));
  add("euler characteristic", o.euler_characteristic() == 26, std::to_string(o.euler_characteristic()));

  bool lengths = true;
  std::vector<int> per_facet(geo.graph.size(), 0);
  for (const auto& c : geo.circles) {
    for (int f : c.facets) ++per_facet[f];
  }
  const bool six = std::all_of(per_facet.begin(), per_facet.end(), [](int n) { return n == 6; });
  bool meets = true;
  for (std::size_t i = 0; i < geo.circles.size(); ++i) {
    int n = 0;
    for (std::size_t j = 0; j < geo.circles.size(); ++j) {
      if (i != j && circles_intersect(geo.circles[i], geo.circles[j])) ++n;
    }
    meets = meets && n == 25;
  }
  add("great circles", geo.circles.size() == 72 && lengths && six && meets,
      std::to_string(geo.circles.size()) + " circles of length 10, 6 per facet: " + (six ? "yes" : "no") +
          ", each meets 25 others: " + (meets ? "yes" : "no"));
  return gates;
}

std::vector<Gate> matrix_gates(const IntersectionData& data) {
  std::vector<Gate> gates;
  try {
    check_patterns(data);
    int zeros = 0;
    for (int j = 0; j < kDimension; ++j) zeros += data.Q(0, j) == 0;
    gates.push_back({"patterns", true,
                     "Q symmetric, zero diagonal, entries in {0,+-1}, " + std::to_string(zeros) +
                         " zeros per row, diagonal included (" + std::to_string(zeros - 1) + " off the diagonal); Mb 6 per column, 30 per row; "
                         "MB 1x2+20x1 per column, 5x2+100x1 per row"});
  } catch (const PairingError& e) {
    gates.push_back({"patterns", false, e.what()});
  }
  const BigInt two72 = BigInt(1) << 72;
  const BigInt dq = det_exact(data.Q);
  gates.push_back({"det Q", dq == two72, "det Q = " + dq.str() + " (2^72 = " + two72.str() + ")"});
  const BigInt da = det_exact(data.a_A());
  gates.push_back({"det Q(a, A)", da == two72, "det = " + da.str()});
  const HomologyCheck h = check_homology(data);
  gates.push_back({"homology", h.ok(),
                   std::string("4 Q^-1 integral: ") + (h.quarter_inverse_integral ? "yes" : "no") +
                       ", A self-intersections 0: " + (h.ridge_pair_self_zero ? "yes" : "no") +
                       ", b/B self-intersections 0: " + (h.surfaces_self_zero ? "yes" : "no") +
                       ", pairings integral: " + (h.surfaces_integral ? "yes" : "no")});
  return gates;
}

std::string matrix_text(const std::string& name, const IntMatrix& m) {
  std::ostringstream os;
  os << "MATRIX " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << '\n';
  }
  return os.str();
}

IntMatrix parse_matrix(const std::string& text, const std::string& expected_name) {
  std::istringstream is(text);
  std::string tag;
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(is >> tag >> name >> rows >> cols) || tag != "MATRIX" || name != expected_name || rows <= 0 ||
      cols <= 0) {
    throw StaleInput("bad matrix header, expected " + expected_name);
  }
  IntMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!(is >> m(r, c))) throw StaleInput("truncated matrix " + name);
    }
  }
  std::string extra;
  if (is >> extra) throw StaleInput("trailing data in matrix " + name);
  return m;
}

std::string group_body(const SymmetryGroup& group) {
  std::ostringstream os;
  for (const auto& g : group.elements) os << g.str() << '\n';
  return os.str();
}

SymmetryGroup parse_group(const std::string& body, const IntMatrix& q) {
  int ri = -1;
  int rj = -1;
  for (int i = 0; i < kDimension && ri < 0; ++i) {
    for (int j = 0; j < kDimension; ++j) {
      if (q(i, j) != 0) {
        ri = i;
        rj = j;
        break;
      }
    }
  }
  if (ri < 0) throw StaleInput("Q is zero");
  std::vector<SignedPermutation> elements;
  std::istringstream is(body);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    SignedPermutation g = SignedPermutation::parse(line, 1);
    g.chi = q(g.image[ri], g.image[rj]) * g.sign[ri] * g.sign[rj] * q(ri, rj);
    if (g.chi == 0) throw StaleInput("group element does not preserve the zero pattern of Q");
    elements.push_back(g);
  }
  if (elements.empty() || !(elements.front() == SignedPermutation::identity())) {
    throw StaleInput("group file must start with the identity");
  }
  try {
    return group_from_elements(std::move(elements));
  } catch (const std::invalid_argument& e) {
    throw StaleInput(std::string("group file: ") + e.what());
  }
}

ExpectedDimension expected_dimension(long long c1sq, const ManifoldInvariants& inv) {
  ExpectedDimension d;
  d.numerator = c1sq - inv.threshold();
  d.integral = d.numerator % 4 == 0;
  d.value = static_cast<double>(d.numerator) / 4.0;
  return d;
}

Conclusion vanishing_report(const SearchReport& report, const ManifoldInvariants& inv) {
  Conclusion c;
  c.max_abs = report.max_abs;
  c.worst = expected_dimension(report.max_abs, inv);
  c.abs_histogram = report.abs_histogram();
  c.vectors = static_cast<long long>(report.vectors.size());
  if (!report.complete()) {
    c.verdict = Verdict::kWithheld;
  } else if (report.max_abs < inv.threshold()) {
    c.verdict = Verdict::kVanishing;
  } else {
    c.verdict = Verdict::kInconclusive;
  }
  return c;
}

std::string Conclusion::text() const {
  std::ostringstream os;
  os << "minimal admissible vectors: " << vectors << '\n';
  os << "|Q(x,x)| histogram: " << describe_histogram(abs_histogram) << '\n';
  os << "max |Q(x,x)|: " << max_abs << '\n';
  os << "worst expected dimension: (" << max_abs << " - 52)/4 = " << worst.value
     << (worst.integral ? "" : " (not an integer)") << '\n';
  switch (verdict) {
    case Verdict::kVanishing:
      os << "conclusion: every admissible class has c1^2 < 52, negative expected dimension; "
            "all Seiberg-Witten invariants vanish\n";
      break;
    case Verdict::kWithheld:
      os << "conclusion withheld: the certificates do not cover the whole cube "
            "(restricted domain or missing shards); statistics above are partial\n";
      break;
    case Verdict::kInconclusive:
      os << "conclusion: inconclusive, some admissible class has |c1^2| >= 52\n";
      break;
  }
  return os.str();
}

int run_build_geometry(const fs::path& dir, std::uint64_t seed, std::ostream& log) {
  const Geometry geo = build_geometry();
  const SurfaceModel model = build_surfaces(geo, orientation_from_seed(seed));
  const auto gates = geometry_gates(geo);
  print_gates(gates, log);
  if (!all_ok(gates)) return kExitVerification;
  StageFile f;
  f.kind = "geometry";
  f.fields.emplace_back("orientation_seed", std::to_string(seed));
  f.body = geometry_body(geo, model, seed);
  fs::create_directories(dir);
  write_text(dir / files::kGeometry, f.render());
  log << "wrote " << (dir / files::kGeometry).string() << '\n';
  return kExitOk;
}

int run_build_matrices(const fs::path& dir, std::ostream& log) {
  const Rebuilt r = rebuild(dir);
  IntersectionData data;
  try {
    data = assemble_matrices(r.geo, r.model);
  } catch (const PairingError& e) {
    log << "FAIL matrix assembly: " << e.what() << '\n';
    return kExitVerification;
  }
  const auto gates = matrix_gates(data);
  print_gates(gates, log);
  log << "contacts: interior " << data.contacts.interior << ", boundary " << data.contacts.boundary
      << ", segments " << data.contacts.line_segment << ", skew " << data.contacts.skew << ", parallel "
      << data.contacts.parallel << '\n';
  if (!all_ok(gates)) return kExitVerification;
  const std::pair<const char*, const IntMatrix*> out[] = {
      {files::kMatrixQ, &data.Q}, {files::kMatrixMb, &data.Mb}, {files::kMatrixMB, &data.MB}};
  const char* names[] = {"Q", "Mb", "MB"};
  for (int k = 0; k < 3; ++k) {
    StageFile f;
    f.kind = "matrix";
    f.inputs.emplace_back(files::kGeometry, r.sha);
    f.body = matrix_text(names[k], *out[k].second);
    write_text(dir / out[k].first, f.render());
    log << "wrote " << (dir / out[k].first).string() << '\n';
  }
  return kExitOk;
}

int run_gen_group(const fs::path& dir, std::ostream& log) {
  const Rebuilt r = rebuild(dir);
  const SymmetryGroup group = generate_group(r.geo, r.model.circles);
  log << "generators " << group.generators.size() << '\n';
  log << "signed permutations induced by the polytope: " << group.polytope_order
      << " (14400 isometries; -1 acts trivially on the circle classes)\n";
  log << "group order with global negation: " << group.order() << " (28800 if -1 acted nontrivially)\n";
  StageFile f;
  f.kind = "group";
  f.inputs.emplace_back(files::kGeometry, r.sha);
  f.fields.emplace_back("order", std::to_string(group.order()));
  f.fields.emplace_back("polytope_order", std::to_string(group.polytope_order));
  f.body = group_body(group);
  write_text(dir / files::kGroup, f.render());
  log << "wrote " << (dir / files::kGroup).string() << '\n';
  return kExitOk;
}

int run_verify(const fs::path& dir, std::ostream& log) {
  const Rebuilt r = rebuild(dir);
  const LoadedMatrices m = load_matrices(dir);
  const Loaded g = load_stage(dir, files::kGroup, "group");

  std::vector<Gate> gates = geometry_gates(r.geo);
  const IntersectionData fresh = assemble_matrices(r.geo, r.model);
  const bool same = fresh.Q == m.data.Q && fresh.Mb == m.data.Mb && fresh.MB == m.data.MB;
  gates.push_back({"matrix files", same, same ? "equal to a fresh assembly" : "differ from a fresh assembly"});
  const auto mg = matrix_gates(m.data);
  gates.insert(gates.end(), mg.begin(), mg.end());

  const SymmetryGroup group = parse_group(g.file.body, m.data.Q);
  const SymmetryGroup regenerated = generate_group(r.geo, r.model.circles);
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (const auto& e : group.elements) a.push_back(e.str());
  for (const auto& e : regenerated.elements) b.push_back(e.str());
  gates.push_back({"group file", a == b, std::to_string(group.order()) + " elements" +
                                             (a == b ? ", equal to a fresh generation" : ", differ from a fresh generation")});
  const EquivarianceReport eq = verify_equivariance(regenerated, m.data, 1000, 1);
  gates.push_back({"equivariance", eq.ok(),
                   "closure, inverses, Q(gx,gy) = chi Q(x,y) on " + std::to_string(eq.samples_checked) +
                       " samples, zero pattern, 792 rows permuted" + (eq.ok() ? "" : ": " + eq.failure)});
  try {
    const ConstraintSystem sys = compile_constraints(m.data, identity_order());
    gates.push_back({"constraints", sys.constraints.size() == kConstraintCount,
                     std::to_string(sys.constraints.size()) + " inequalities (72 a, 360 b, 360 B)"});
  } catch (const SearchError& e) {
    gates.push_back({"constraints", false, e.what()});
  }
  print_gates(gates, log);
  return all_ok(gates) ? kExitOk : kExitVerification;
}

namespace {

struct SinkContext {
  fs::path path;
};

void write_checkpoint_sink(const Checkpoint& c, void* context) {
  write_text(static_cast<SinkContext*>(context)->path, write_checkpoint(c));
}

}  // namespace

int run_search(const fs::path& dir, const SearchCommand& cmd, std::ostream& log) {
  const LoadedMatrices m = load_matrices(dir);
  const Loaded g = load_stage(dir, files::kGroup, "group");
  const auto geometry_sha = file_sha256(dir / files::kGeometry);
  for (const auto& [name, sha] : g.file.inputs) {
    if (name == files::kGeometry && sha != geometry_sha) throw StaleInput("group.txt is stale");
  }
  try {
    check_patterns(m.data);
  } catch (const PairingError& e) {
    log << "FAIL matrix patterns: " << e.what() << '\n';
    return kExitVerification;
  }
  const SymmetryGroup group = parse_group(g.file.body, m.data.Q);
  const VariableOrder order = cmd.greedy_order ? greedy_cover_order(m.data) : identity_order();
  const ConstraintSystem sys = compile_constraints(m.data, order, cmd.require_even);

  SearchOptions o;
  o.domain = SearchDomain::full();
  if (cmd.free_support >= 0) o.domain.max_support = cmd.free_support;
  std::string key;
  for (const auto& [name, sha] : m.shas) key += sha;
  key += g.sha + o.domain.str() + (cmd.greedy_order ? "greedy" : "identity") + (cmd.require_even ? "even" : "any");
  o.instance = sha256_hex(key).substr(0, 16);
  o.checkpoint_every = cmd.checkpoint_every;
  o.stop_after = cmd.stop_after;
  o.interrupt = cmd.interrupt;

  std::string output = cmd.output;
  if (output.empty()) {
    output = cmd.shard_index >= 0 ? "certificate-" + std::to_string(cmd.shard_index) + "-of-" +
                                        std::to_string(cmd.shard_count) + ".txt"
                                  : files::kCertificate;
  }
  const fs::path out_path = dir / output;
  SinkContext sink{out_path.string() + ".checkpoint"};

  log << "instance " << o.instance << ", order " << (cmd.greedy_order ? "greedy" : "identity") << ", parity "
      << (cmd.require_even ? "even" : "off") << ", support cap "
      << (cmd.free_support >= 0 ? std::to_string(cmd.free_support) : "none") << ", group order " << group.order()
      << '\n';

  SearchReport report;
  if (cmd.shard_index < 0 && cmd.threads > 1) {
    if (!cmd.resume.empty() || cmd.checkpoint_every > 0 || cmd.stop_after > 0) {
      throw std::invalid_argument("checkpoints need a single shard; use --shard-index with --threads 1");
    }
    const int depth = cmd.shard_depth > 0 ? cmd.shard_depth : 6;
    const int count = cmd.shard_count > 1 ? cmd.shard_count : 8 * cmd.threads;
    report = run_shards(sys, group, o, depth, count, cmd.threads);
    if (!report.complete() && static_cast<int>(report.shards.size()) != count) {
      log << "interrupted: " << report.shards.size() << " of " << count << " shards finished\n";
      return kExitInterrupted;
    }
  } else {
    if (cmd.shard_index >= 0) o.shard = {cmd.shard_depth, cmd.shard_index, cmd.shard_count};
    std::optional<Checkpoint> resume;
    if (!cmd.resume.empty()) {
      try {
        resume = read_checkpoint(read_text(dir / cmd.resume));
      } catch (const SearchError& e) {
        throw StaleInput(std::string("refusing to resume: ") + e.what());
      }
    }
    SearchOutcome out;
    try {
      out = dfs_search(sys, group, o, resume ? &*resume : nullptr, cmd.checkpoint_every > 0 ? write_checkpoint_sink : nullptr,
                       &sink);
    } catch (const SearchError& e) {
      throw StaleInput(std::string("refusing to resume: ") + e.what());
    }
    if (out.interrupted) {
      write_text(sink.path, write_checkpoint(out.checkpoint));
      log << "interrupted after " << out.report.nodes << " nodes; checkpoint " << sink.path.string() << '\n';
      return kExitInterrupted;
    }
    report = std::move(out.report);
  }

  for (const auto& e : report.vectors) {
    const VectorCheck c = verify_vector(e.x, m.data);
    if (!c.admissible(cmd.require_even) || c.selfint != e.selfint) {
      log << "FAIL emitted vector does not verify: " << e.x.str() << '\n';
      return kExitVerification;
    }
  }
  StageFile f;
  f.kind = "certificate";
  f.inputs = m.shas;
  f.inputs.emplace_back(files::kGroup, g.sha);
  f.fields.emplace_back("order", cmd.greedy_order ? "greedy" : "identity");
  f.fields.emplace_back("parity", cmd.require_even ? "even" : "off");
  f.fields.emplace_back("support_cap", cmd.free_support >= 0 ? std::to_string(cmd.free_support) : "none");
  f.body = write_certificate(report);
  write_text(out_path, f.render());
  if (fs::exists(sink.path)) fs::remove(sink.path);
  print_report(report, log);
  log << "every emitted vector re-verified from the matrix files\n";
  log << "wall time " << std::fixed << std::setprecision(2) << report.wall_seconds << " s\n";
  log << "wrote " << out_path.string() << '\n';
  return kExitOk;
}

int run_report(const fs::path& dir, const std::vector<std::string>& certificates, std::ostream& log) {
  if (certificates.empty()) throw StaleInput("no certificate files given");
  const LoadedMatrices m = load_matrices(dir);
  std::vector<SearchReport> reports;
  std::optional<std::string> parity;
  for (const auto& name : certificates) {
    const std::string text = read_text(dir / name);
    const StageFile f = StageFile::parse(text);
    if (f.kind != "certificate") throw StaleInput(name + " is not a certificate");
    check_inputs(dir, f);
    if (parity && f.field("parity") != parity) throw StaleInput("certificates use different parity settings");
    parity = f.field("parity");
    try {
      reports.push_back(read_certificate(f.body));
    } catch (const SearchError& e) {
      log << "FAIL " << name << ": " << e.what() << '\n';
      return kExitVerification;
    }
  }
  const bool even = parity.value_or("even") == "even";
  SearchReport merged;
  try {
    merged = merge_reports(reports);
  } catch (const SearchError& e) {
    log << "FAIL merge: " << e.what() << '\n';
    return kExitVerification;
  }
  for (const auto& e : merged.vectors) {
    const VectorCheck c = verify_vector(e.x, m.data);
    if (!c.admissible(even) || c.selfint != e.selfint) {
      log << "FAIL certificate vector does not verify: " << e.x.str() << '\n';
      return kExitVerification;
    }
  }
  log << "shards covered " << merged.shards.size() << " of " << merged.shard_count
      << (merged.restricted ? ", restricted domain" : "") << ", parity " << (even ? "even" : "off") << '\n';
  ManifoldInvariants inv;
  Conclusion c = vanishing_report(merged, inv);
  if (!even && c.verdict == Verdict::kVanishing) c.verdict = Verdict::kWithheld;
  log << c.text();
  switch (c.verdict) {
    case Verdict::kVanishing:
      return kExitOk;
    case Verdict::kWithheld:
      return kExitStale;
    case Verdict::kInconclusive:
      return kExitVerification;
  }
  return kExitVerification;
}

}  // namespace davis
