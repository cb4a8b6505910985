#pragma once

// Stage files, verification gates and the commands behind the `davis` tool.
//
// Every stage file starts with `#!` header lines:
//   #! davis <kind>
//   #! input <file> <sha256 of that file>
//   #! <key> <value>
// A stage refuses to run when a recorded input no longer hashes to the
// recorded value.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "davis/enumerator.hpp"
#include "davis/pairings.hpp"
#include "davis/polytope.hpp"
#include "davis/symmetry.hpp"

namespace davis {

enum ExitCode : int { kExitOk = 0, kExitVerification = 1, kExitStale = 2, kExitInterrupted = 3 };

namespace files {
inline constexpr const char* kGeometry = "geometry.txt";
inline constexpr const char* kMatrixQ = "matrix_Q.txt";
inline constexpr const char* kMatrixMb = "matrix_Mb.txt";
inline constexpr const char* kMatrixMB = "matrix_MB.txt";
inline constexpr const char* kGroup = "group.txt";
inline constexpr const char* kCertificate = "certificate.txt";
}  // namespace files

/// Missing, stale or unreadable inputs.
class StaleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StageFile {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> inputs;  // file name, sha256
  std::vector<std::pair<std::string, std::string>> fields;
  std::string body;

  std::string render() const;
  static StageFile parse(const std::string& text);
  std::optional<std::string> field(const std::string& key) const;
};

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file and a rename.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string file_sha256(const std::filesystem::path& path);
/// Throws StaleInput if a recorded input is missing or has changed.
void check_inputs(const std::filesystem::path& dir, const StageFile& file);

/// Seed 0 is the canonical orientation; any other seed flips each class
/// with probability 1/2, reproducibly.
OrientationChoice orientation_from_seed(std::uint64_t seed);

std::string geometry_body(const Geometry& geo, const SurfaceModel& model, std::uint64_t seed);

struct Gate {
  std::string name;
  bool ok = false;
  std::string detail;
};

std::vector<Gate> geometry_gates(const Geometry& geo);
std::vector<Gate> matrix_gates(const IntersectionData& data);

std::string matrix_text(const std::string& name, const IntMatrix& m);
/// Parses `MATRIX <name> <rows> <cols>` and the rows after it.
IntMatrix parse_matrix(const std::string& text, const std::string& expected_name);

std::string group_body(const SymmetryGroup& group);
/// chi of each element is recovered from Q.
SymmetryGroup parse_group(const std::string& body, const IntMatrix& q);

struct ManifoldInvariants {
  int euler = 26;
  int signature = 0;
  int b_plus = 36;
  int b1 = 24;
  int b2 = 72;
  int adjunction_bound = 2;

  int threshold() const { return 2 * euler + 3 * signature; }
};

struct ExpectedDimension {
  long long numerator = 0;  // c1^2 - 52, over 4
  bool integral = true;
  double value = 0.0;
};

ExpectedDimension expected_dimension(long long c1sq, const ManifoldInvariants& inv = {});

enum class Verdict { kVanishing, kWithheld, kInconclusive };

struct Conclusion {
  Verdict verdict = Verdict::kWithheld;
  long long max_abs = 0;
  ExpectedDimension worst;
  std::map<long long, long long> abs_histogram;
  long long vectors = 0;

  std::string text() const;
};

/// Vanishing iff the report covers the whole cube and max |Q(x, x)| is
/// below the threshold; a larger value is inconclusive, never a proof of
/// nonvanishing.
Conclusion vanishing_report(const SearchReport& report, const ManifoldInvariants& inv = {});

struct SearchCommand {
  int free_support = -1;  // -1: no cap
  int shard_depth = 0;
  int shard_index = -1;  // -1: all shards
  int shard_count = 1;
  std::string resume;
  int threads = 1;
  long long checkpoint_every = 0;
  long long stop_after = 0;
  bool greedy_order = false;
  bool require_even = true;
  std::string output;
  const std::atomic<bool>* interrupt = nullptr;
};

int run_build_geometry(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& log);
int run_build_matrices(const std::filesystem::path& dir, std::ostream& log);
int run_gen_group(const std::filesystem::path& dir, std::ostream& log);
int run_verify(const std::filesystem::path& dir, std::ostream& log);
int run_search(const std::filesystem::path& dir, const SearchCommand& cmd, std::ostream& log);
int run_report(const std::filesystem::path& dir, const std::vector<std::string>& certificates,
               std::ostream& log);

}  // namespace davis
