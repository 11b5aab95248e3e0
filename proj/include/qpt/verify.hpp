#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpt/search.hpp"
#include "qpt/shape.hpp"

namespace qpt {

enum class SearchMode { exhaustive, sample };

std::string_view to_string(SearchMode mode);
SearchMode parse_mode(std::string_view name);

inline constexpr std::uint64_t kDefaultCubicPrimeCap = 31;

// (shape, p) pairs with a machine-checked solubility claim.
bool is_supported_pair(Shape shape, std::uint64_t p, std::uint64_t cubic_prime_cap = kDefaultCubicPrimeCap);

// The coefficient space after normalizing unit slots to power-class representatives.
// Enumeration is lexicographic in slot order, first slot most significant.
class CoefficientSpace {
public:
    CoefficientSpace(Shape shape, std::uint64_t p, std::uint64_t cubic_prime_cap = kDefaultCubicPrimeCap);

    const ShapeTemplate& shape_template() const { return *tmpl_; }
    const Modulus& modulus() const { return modulus_; }
    const std::vector<std::uint64_t>& unit_classes() const { return unit_classes_; }
    std::span<const std::uint64_t> choices(std::size_t slot) const;

    // Exact size; nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> size() const;
    std::string size_decimal() const;

    void decode(std::uint64_t index, std::span<std::uint64_t> out) const;
    // Assignment number `index` of the seeded stream; a pure function of (seed, index).
    void sample(std::uint64_t seed, std::uint64_t index, std::span<std::uint64_t> out) const;

private:
    const ShapeTemplate* tmpl_;
    Modulus modulus_;
    std::vector<std::uint64_t> unit_classes_;
    std::vector<std::uint64_t> all_residues_;
};

CoefficientSpace reduced_coefficient_space(Shape shape, std::uint64_t p);

// Counter-based 64-bit draw: stream position (index, lane) under key seed.
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t lane);

struct SearchTask {
    Shape shape = Shape::r1;
    std::uint64_t p = 2;
    SearchMode mode = SearchMode::exhaustive;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    std::uint32_t partitions = 1;

    friend bool operator==(const SearchTask&, const SearchTask&) = default;
};

// FNV-1a over the canonical task description.
std::uint64_t task_hash(const SearchTask& task);

struct Counterexample {
    std::uint64_t index;
    std::vector<std::uint64_t> slots;

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct WitnessSample {
    std::uint64_t index;
    std::vector<std::uint64_t> slots;
    Point point;
    unsigned coordinate;

    friend bool operator==(const WitnessSample&, const WitnessSample&) = default;
};

inline constexpr std::size_t kWitnessSamples = 8;

struct PartitionState {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
    std::uint64_t next = 0;
    std::uint64_t forms_checked = 0;
    std::vector<Counterexample> counterexamples;
    std::vector<WitnessSample> witnesses;  // first kWitnessSamples in index order

    friend bool operator==(const PartitionState&, const PartitionState&) = default;
};

struct Checkpoint {
    SearchTask task;
    std::uint64_t hash = 0;
    std::vector<PartitionState> partitions;
};

struct VerificationReport {
    SearchTask task;
    std::uint64_t hash = 0;
    std::string space_size;
    std::uint64_t forms_checked = 0;
    std::vector<Counterexample> counterexamples;
    std::vector<WitnessSample> witness_samples;
    std::chrono::duration<double> elapsed{0};
    bool completed = false;
};

struct RunOptions {
    unsigned threads = 1;
    // Stop after this many forms in the current session (checkpoint stays resumable).
    std::optional<std::uint64_t> max_forms;
    std::filesystem::path checkpoint_path;
    std::uint64_t checkpoint_every = 1'000'000;
    // One line per 10^6 forms when set.
    std::ostream* progress = nullptr;
};

class Verifier {
public:
    explicit Verifier(const SearchTask& task);
    // Throws CheckpointError when the stored hash does not match the stored task.
    explicit Verifier(Checkpoint checkpoint);

    VerificationReport run(const RunOptions& options = {});

    Checkpoint checkpoint() const;
    VerificationReport report() const;
    const SearchTask& task() const { return task_; }

private:
    SearchTask task_;
    CoefficientSpace space_;
    std::vector<PartitionState> parts_;
    std::chrono::duration<double> elapsed_{0};
};

VerificationReport verify_shape(const SearchTask& task, const RunOptions& options = {});
VerificationReport resume(const Checkpoint& checkpoint, const RunOptions& options = {});
// Also checks the checkpoint belongs to `expected` (e.g. rebuilt from CLI flags).
VerificationReport resume(const Checkpoint& checkpoint, const SearchTask& expected, const RunOptions& options = {});

// Re-checks a witness with the naive evaluator (no power tables).
bool recheck_witness(const CoefficientSpace& space, const WitnessSample& w);

nlohmann::json to_json(const SearchTask& task);
SearchTask task_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

Checkpoint read_checkpoint(const std::filesystem::path& path);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

}  // namespace qpt
