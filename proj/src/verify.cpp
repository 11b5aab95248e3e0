#include "qpt/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kChunk = 4096;
constexpr std::uint64_t kProgressEvery = 1'000'000;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::uint64_t parse_hex64(const std::string& s) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used, 16);
        if (used != s.size()) throw CheckpointError("bad hash '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw CheckpointError("bad hash '" + s + "'");
    }
}

Modulus modulus_for(Shape shape, std::uint64_t p) { return shape == Shape::r3 ? Modulus(p, 2) : Modulus(p, 1); }

std::uint64_t total_items(const SearchTask& task, const CoefficientSpace& space) {
    if (task.mode == SearchMode::sample) return task.sample_count;
    auto n = space.size();
    if (!n) {
        throw UsageError("the reduced space for " + std::string(to_string(task.shape)) + " has " + space.size_decimal() +
                         " elements; exhaustive enumeration is not possible, use sample mode");
    }
    return *n;
}

std::vector<PartitionState> initial_partitions(std::uint64_t total, std::uint32_t parts) {
    std::vector<PartitionState> out(parts);
    for (std::uint32_t q = 0; q < parts; ++q) {
        out[q].begin = static_cast<std::uint64_t>(u128{total} * q / parts);
        out[q].end = static_cast<std::uint64_t>(u128{total} * (q + 1) / parts);
        out[q].next = out[q].begin;
    }
    return out;
}

void validate_task(const SearchTask& task) {
    if (!is_supported_pair(task.shape, task.p)) {
        throw UsageError("no solubility claim for shape " + std::string(to_string(task.shape)) + " at p = " +
                         std::to_string(task.p));
    }
    if (task.partitions < 1) throw UsageError("partitions must be at least 1");
    if (task.mode == SearchMode::sample && task.sample_count < 1) throw UsageError("sample mode needs at least one sample");
}

}  // namespace

std::string_view to_string(SearchMode mode) { return mode == SearchMode::exhaustive ? "exhaustive" : "sample"; }

SearchMode parse_mode(std::string_view name) {
    if (name == "exhaustive") return SearchMode::exhaustive;
    if (name == "sample") return SearchMode::sample;
    throw UsageError("unknown mode '" + std::string(name) + "'");
}

bool is_supported_pair(Shape shape, std::uint64_t p, std::uint64_t cubic_prime_cap) {
    switch (shape) {
        case Shape::r1: return p == 2 || p == 3;
        case Shape::r1star: return p == 7 || p == 13;
        case Shape::r2: return p == 11;
        case Shape::r3: return p == 5;
        case Shape::cubic_ad: return p != 3 && p <= cubic_prime_cap && is_prime(p);
    }
    return false;
}

CoefficientSpace::CoefficientSpace(Shape shape, std::uint64_t p, std::uint64_t cubic_prime_cap)
    : tmpl_(&qpt::shape_template(shape)), modulus_(is_prime(p) ? modulus_for(shape, p) : Modulus(2)) {
    if (!is_supported_pair(shape, p, cubic_prime_cap)) {
        throw UsageError("no solubility claim for shape " + std::string(to_string(shape)) + " at p = " + std::to_string(p));
    }
    unit_classes_ = power_classes(modulus_, tmpl_->degree);
    all_residues_.resize(modulus_.m());
    for (std::uint64_t x = 0; x < modulus_.m(); ++x) all_residues_[x] = x;
}

std::span<const std::uint64_t> CoefficientSpace::choices(std::size_t slot) const {
    return tmpl_->slots.at(slot).unit ? std::span<const std::uint64_t>(unit_classes_)
                                      : std::span<const std::uint64_t>(all_residues_);
}

std::optional<std::uint64_t> CoefficientSpace::size() const {
    std::uint64_t n = 1;
    for (std::size_t s = 0; s < tmpl_->slots.size(); ++s) {
        if (__builtin_mul_overflow(n, choices(s).size(), &n)) return std::nullopt;
    }
    return n;
}

std::string CoefficientSpace::size_decimal() const {
    std::vector<std::uint32_t> limbs{1};  // base 1e9, little endian
    for (std::size_t s = 0; s < tmpl_->slots.size(); ++s) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs) {
            std::uint64_t cur = std::uint64_t{limb} * choices(s).size() + carry;
            limb = static_cast<std::uint32_t>(cur % 1'000'000'000);
            carry = cur / 1'000'000'000;
        }
        while (carry) {
            limbs.push_back(static_cast<std::uint32_t>(carry % 1'000'000'000));
            carry /= 1'000'000'000;
        }
    }
    std::ostringstream os;
    os << limbs.back();
    for (std::size_t i = limbs.size() - 1; i-- > 0;) os << std::setw(9) << std::setfill('0') << limbs[i];
    return os.str();
}

void CoefficientSpace::decode(std::uint64_t index, std::span<std::uint64_t> out) const {
    if (out.size() != tmpl_->slots.size()) throw UsageError("slot buffer has the wrong size");
    for (std::size_t s = out.size(); s-- > 0;) {
        const auto c = choices(s);
        out[s] = c[index % c.size()];
        index /= c.size();
    }
    if (index != 0) throw UsageError("index beyond the coefficient space");
}

void CoefficientSpace::sample(std::uint64_t seed, std::uint64_t index, std::span<std::uint64_t> out) const {
    if (out.size() != tmpl_->slots.size()) throw UsageError("slot buffer has the wrong size");
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto c = choices(s);
        const auto r = counter_draw(seed, index, s);
        out[s] = c[static_cast<std::size_t>((u128{r} * c.size()) >> 64)];
    }
}

CoefficientSpace reduced_coefficient_space(Shape shape, std::uint64_t p) { return CoefficientSpace(shape, p); }

std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    const auto key = mix64(seed ^ 0x243f6a8885a308d3ULL);
    auto x = mix64(index ^ key);
    return mix64(x + (lane + 1) * 0x9e3779b97f4a7c15ULL + key);
}

std::uint64_t task_hash(const SearchTask& task) {
    std::ostringstream os;
    os << "qpt-task-v1|shape=" << to_string(task.shape) << "|p=" << task.p << "|mode=" << to_string(task.mode)
       << "|seed=" << task.seed << "|samples=" << task.sample_count << "|partitions=" << task.partitions;
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Verifier::Verifier(const SearchTask& task) : task_(task), space_((validate_task(task), task.shape), task.p) {
    parts_ = initial_partitions(total_items(task_, space_), task_.partitions);
}

Verifier::Verifier(Checkpoint cp) : task_(cp.task), space_((validate_task(cp.task), cp.task.shape), cp.task.p) {
    if (task_hash(task_) != cp.hash) throw CheckpointError("checkpoint hash does not match its task");
    auto expected = initial_partitions(total_items(task_, space_), task_.partitions);
    if (cp.partitions.size() != expected.size()) throw CheckpointError("checkpoint has the wrong partition count");
    for (std::size_t q = 0; q < expected.size(); ++q) {
        const auto& got = cp.partitions[q];
        if (got.begin != expected[q].begin || got.end != expected[q].end || got.next < got.begin ||
            got.next > got.end || got.forms_checked != got.next - got.begin) {
            throw CheckpointError("checkpoint partition " + std::to_string(q) + " is corrupted");
        }
    }
    parts_ = std::move(cp.partitions);
}

VerificationReport Verifier::run(const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const auto& tmpl = space_.shape_template();
    const bool staged = task_.shape == Shape::r3;
    const std::size_t nslots = tmpl.slots.size();

    std::mutex mu;
    std::atomic<std::size_t> next_part{0};
    std::atomic<std::uint64_t> session{0};
    std::atomic<bool> stop{false};
    std::uint64_t done_before = 0;
    for (const auto& part : parts_) done_before += part.forms_checked;
    std::atomic<std::uint64_t> processed{done_before};
    std::uint64_t since_checkpoint = 0;
    std::exception_ptr failure;

    auto reserve = [&](std::uint64_t want) -> std::uint64_t {
        if (!options.max_forms) return want;
        auto used = session.load();
        while (true) {
            if (used >= *options.max_forms) return 0;
            auto take = std::min(want, *options.max_forms - used);
            if (session.compare_exchange_weak(used, used + take)) return take;
        }
    };

    auto worker = [&] {
        try {
            CompiledForm form(tmpl, space_.modulus());
            std::vector<std::uint64_t> vals(nslots);
            for (std::size_t q; !stop && (q = next_part++) < parts_.size();) {
                PartitionState local;
                {
                    std::lock_guard lock(mu);
                    local = parts_[q];
                }
                while (local.next < local.end && !stop) {
                    auto chunk = reserve(std::min(kChunk, local.end - local.next));
                    if (chunk == 0) {
                        stop = true;
                        break;
                    }
                    for (auto idx = local.next; idx < local.next + chunk; ++idx) {
                        if (task_.mode == SearchMode::exhaustive) {
                            space_.decode(idx, vals);
                        } else {
                            space_.sample(task_.seed, idx, vals);
                        }
                        form.set_coefficients(vals);
                        std::optional<WitnessSample> found;
                        if (staged) {
                            if (auto w = find_result3_witness(form)) found = WitnessSample{idx, vals, w->point, w->index};
                        } else {
                            if (auto z = find_nonsingular_zero(form)) found = WitnessSample{idx, vals, z->point, z->index};
                        }
                        ++local.forms_checked;
                        if (!found) {
                            local.counterexamples.push_back({idx, vals});
                        } else if (local.witnesses.size() < kWitnessSamples) {
                            local.witnesses.push_back(std::move(*found));
                        }
                    }
                    local.next += chunk;
                    const auto total = processed.fetch_add(chunk) + chunk;
                    std::lock_guard lock(mu);
                    parts_[q] = local;
                    since_checkpoint += chunk;
                    if (!options.checkpoint_path.empty() && since_checkpoint >= options.checkpoint_every) {
                        write_checkpoint(options.checkpoint_path, checkpoint());
                        since_checkpoint = 0;
                    }
                    if (options.progress && total / kProgressEvery != (total - chunk) / kProgressEvery) {
                        std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
                        *options.progress << "verify " << to_string(task_.shape) << " p=" << task_.p
                                          << ": index=" << total << " elapsed=" << std::fixed << std::setprecision(1)
                                          << el.count() << "s" << std::endl;
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            stop = true;
        }
    };

    const auto nthreads = std::max<std::size_t>(1, std::min<std::size_t>(options.threads, parts_.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    elapsed_ += std::chrono::steady_clock::now() - start;
    if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, checkpoint());
    return report();
}

Checkpoint Verifier::checkpoint() const { return {task_, task_hash(task_), parts_}; }

VerificationReport Verifier::report() const {
    VerificationReport r;
    r.task = task_;
    r.hash = task_hash(task_);
    r.space_size = space_.size_decimal();
    r.completed = true;
    for (const auto& part : parts_) {
        r.forms_checked += part.forms_checked;
        r.counterexamples.insert(r.counterexamples.end(), part.counterexamples.begin(), part.counterexamples.end());
        for (const auto& w : part.witnesses) {
            if (r.witness_samples.size() < kWitnessSamples) r.witness_samples.push_back(w);
        }
        if (part.next != part.end) r.completed = false;
    }
    r.elapsed = elapsed_;
    return r;
}

VerificationReport verify_shape(const SearchTask& task, const RunOptions& options) {
    Verifier v(task);
    return v.run(options);
}

VerificationReport resume(const Checkpoint& checkpoint, const RunOptions& options) {
    Verifier v(checkpoint);
    return v.run(options);
}

VerificationReport resume(const Checkpoint& checkpoint, const SearchTask& expected, const RunOptions& options) {
    if (task_hash(expected) != checkpoint.hash) throw CheckpointError("checkpoint belongs to a different task");
    return resume(checkpoint, options);
}

bool recheck_witness(const CoefficientSpace& space, const WitnessSample& w) {
    const auto& tmpl = space.shape_template();
    const Form f = instantiate_shape(tmpl, w.slots, space.modulus());
    if (w.point.size() != f.num_vars() || w.coordinate >= f.num_vars()) return false;
    if (tmpl.shape == Shape::r3) return check_result3_witness(f, w.point, w.coordinate);
    if (std::all_of(w.point.begin(), w.point.end(), [](auto x) { return x == 0; })) return false;
    return evaluate(f, w.point) == 0 && evaluate(hasse_derivative(f, w.coordinate, 1), w.point) != 0;
}

nlohmann::json to_json(const SearchTask& task) {
    return {{"shape", std::string(to_string(task.shape))},
            {"p", task.p},
            {"mode", std::string(to_string(task.mode))},
            {"sample_count", task.sample_count},
            {"seed", task.seed},
            {"partitions", task.partitions}};
}

SearchTask task_from_json(const nlohmann::json& doc) {
    try {
        SearchTask t;
        t.shape = parse_shape(doc.at("shape").get<std::string>());
        t.p = doc.at("p").get<std::uint64_t>();
        t.mode = parse_mode(doc.at("mode").get<std::string>());
        t.sample_count = doc.at("sample_count").get<std::uint64_t>();
        t.seed = doc.at("seed").get<std::uint64_t>();
        t.partitions = doc.at("partitions").get<std::uint32_t>();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("malformed task: ") + e.what());
    } catch (const UsageError& e) {
        throw CheckpointError(std::string("malformed task: ") + e.what());
    }
}

namespace {

nlohmann::json named_slots(const ShapeTemplate& tmpl, const std::vector<std::uint64_t>& vals) {
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t s = 0; s < vals.size() && s < tmpl.slots.size(); ++s) out[tmpl.slots[s].name] = vals[s];
    return out;
}

nlohmann::json witness_json(const WitnessSample& w) {
    return {{"index", w.index}, {"slots", w.slots}, {"point", w.point}, {"coordinate", w.coordinate}};
}

nlohmann::json partition_json(const PartitionState& part) {
    auto cex = nlohmann::json::array();
    for (const auto& c : part.counterexamples) cex.push_back({{"index", c.index}, {"slots", c.slots}});
    auto wit = nlohmann::json::array();
    for (const auto& w : part.witnesses) wit.push_back(witness_json(w));
    return {{"begin", part.begin},       {"end", part.end},           {"next", part.next},
            {"forms_checked", part.forms_checked}, {"counterexamples", cex}, {"witnesses", wit}};
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
    const auto& tmpl = shape_template(report.task.shape);
    auto cex = nlohmann::json::array();
    for (const auto& c : report.counterexamples) cex.push_back({{"index", c.index}, {"slots", named_slots(tmpl, c.slots)}});
    auto wit = nlohmann::json::array();
    for (const auto& w : report.witness_samples) {
        wit.push_back({{"index", w.index}, {"slots", named_slots(tmpl, w.slots)}, {"point", w.point}, {"coordinate", w.coordinate}});
    }
    return {{"task", to_json(report.task)},
            {"task_hash", hex64(report.hash)},
            {"space_size", report.space_size},
            {"forms_checked", report.forms_checked},
            {"counterexamples", cex},
            {"witness_samples", wit},
            {"completed", report.completed}};
}

nlohmann::json to_json(const Checkpoint& cp) {
    auto parts = nlohmann::json::array();
    for (const auto& part : cp.partitions) parts.push_back(partition_json(part));
    return {{"task", to_json(cp.task)}, {"task_hash", hex64(cp.hash)}, {"partitions", parts}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
    try {
        Checkpoint cp;
        cp.task = task_from_json(doc.at("task"));
        cp.hash = parse_hex64(doc.at("task_hash").get<std::string>());
        for (const auto& pj : doc.at("partitions")) {
            PartitionState part;
            part.begin = pj.at("begin").get<std::uint64_t>();
            part.end = pj.at("end").get<std::uint64_t>();
            part.next = pj.at("next").get<std::uint64_t>();
            part.forms_checked = pj.at("forms_checked").get<std::uint64_t>();
            for (const auto& c : pj.at("counterexamples")) {
                part.counterexamples.push_back({c.at("index").get<std::uint64_t>(), c.at("slots").get<std::vector<std::uint64_t>>()});
            }
            for (const auto& w : pj.at("witnesses")) {
                part.witnesses.push_back({w.at("index").get<std::uint64_t>(), w.at("slots").get<std::vector<std::uint64_t>>(),
                                          w.at("point").get<Point>(), w.at("coordinate").get<unsigned>()});
            }
            cp.partitions.push_back(std::move(part));
        }
        return cp;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError("checkpoint " + path.string() + " is not valid JSON");
    }
    return checkpoint_from_json(doc);
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw UsageError("cannot write checkpoint " + tmp.string());
        out << to_json(cp).dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qpt
