#include "txg/threelin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "txg/errors.hpp"

namespace txg {

ThreeLinInstance ThreeLinInstance::make(int m, std::vector<ThreeLinEquation> raw) {
    if (m < kMinInstanceLength || m > kMaxLength)
        throw validation_error("instance variable count " + std::to_string(m) + " outside [" +
                               std::to_string(kMinInstanceLength) + ", " +
                               std::to_string(kMaxLength) + "]");
    std::vector<ThreeLinEquation> merged;
    merged.reserve(raw.size());
    std::map<std::tuple<int, int, int, int>, std::size_t> index;
    for (auto eq : raw) {
        int lo = std::min({eq.i, eq.j, eq.k});
        int hi = std::max({eq.i, eq.j, eq.k});
        int mid = eq.i + eq.j + eq.k - lo - hi;
        eq.i = lo;
        eq.j = mid;
        eq.k = hi;
        if (eq.i < 1 || eq.k > m)
            throw validation_error("equation index outside [1, " + std::to_string(m) + "]");
        if (eq.i == eq.j || eq.j == eq.k)
            throw validation_error("equation indices must be distinct");
        if (eq.c != 0 && eq.c != 1)
            throw validation_error("equation right-hand side must be 0 or 1");
        if (!(eq.weight >= 0.0))
            throw validation_error("equation weight " + std::to_string(eq.weight) +
                                   " is negative");
        auto key = std::make_tuple(eq.i, eq.j, eq.k, eq.c);
        auto found = index.find(key);
        if (found == index.end()) {
            index.emplace(key, merged.size());
            merged.push_back(eq);
        } else {
            merged[found->second].weight += eq.weight;
        }
    }
    double total = 0.0;
    for (const auto& eq : merged) total += eq.weight;
    if (std::abs(total - 1.0) > 1e-9)
        throw validation_error("equation weights sum to " + std::to_string(total) +
                               ", more than 1e-9 from 1");
    for (auto& eq : merged) eq.weight /= total;
    return ThreeLinInstance(m, std::move(merged));
}

double witness_value(const ThreeLinInstance& inst, const BitVector& w) {
    if (w.length() != inst.m())
        throw dimension_error("witness length " + std::to_string(w.length()) +
                              " does not match instance variable count " +
                              std::to_string(inst.m()));
    double total = 0.0;
    for (const auto& eq : inst.equations()) {
        const std::uint32_t mask = (std::uint32_t{1} << (eq.i - 1)) |
                                   (std::uint32_t{1} << (eq.j - 1)) |
                                   (std::uint32_t{1} << (eq.k - 1));
        if ((std::popcount(w.word() & mask) & 1) == eq.c) total += eq.weight;
    }
    return total;
}

namespace {

struct WitnessCandidate {
    double value = -1.0;
    std::uint32_t word = 0;
};

WitnessCandidate scan_witnesses(const ThreeLinInstance& inst, std::uint32_t begin,
                                std::uint32_t end) {
    // Equations prefolded to (mask, c, weight).
    struct Row {
        std::uint32_t mask;
        int c;
        double weight;
    };
    std::vector<Row> rows;
    rows.reserve(inst.equations().size());
    for (const auto& eq : inst.equations())
        rows.push_back({(std::uint32_t{1} << (eq.i - 1)) | (std::uint32_t{1} << (eq.j - 1)) |
                            (std::uint32_t{1} << (eq.k - 1)),
                        eq.c, eq.weight});
    WitnessCandidate best;
    for (std::uint32_t w = begin; w != end; ++w) {
        double value = 0.0;
        for (const auto& row : rows)
            if ((std::popcount(w & row.mask) & 1) == row.c) value += row.weight;
        if (value > best.value) best = {value, w};
    }
    return best;
}

}  // namespace

std::pair<BitVector, double> best_witness(const ThreeLinInstance& inst, int n_threads) {
    const std::uint64_t n = std::uint64_t{1} << inst.m();
    WitnessCandidate best;
    if (n_threads <= 1) {
        best = scan_witnesses(inst, 0, static_cast<std::uint32_t>(n));
    } else {
        const std::uint64_t workers = static_cast<std::uint64_t>(n_threads);
        std::vector<WitnessCandidate> partial(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            auto begin = static_cast<std::uint32_t>(n * w / workers);
            auto end = static_cast<std::uint32_t>(n * (w + 1) / workers);
            pool.emplace_back(
                [&, w, begin, end] { partial[w] = scan_witnesses(inst, begin, end); });
        }
        for (auto& worker : pool) worker.join();
        best = partial[0];
        for (std::uint64_t w = 1; w < workers; ++w) {
            const WitnessCandidate& c = partial[w];
            if (c.value > best.value || (c.value == best.value && c.word < best.word)) best = c;
        }
    }
    return {BitVector(inst.m(), best.word), best.value};
}

TransversalGame game_from_instance(const ThreeLinInstance& inst) {
    std::vector<GameClause> clauses;
    clauses.reserve(inst.equations().size());
    for (const auto& eq : inst.equations()) {
        BitVector z = BitVector::basis(eq.i, inst.m()) ^ BitVector::basis(eq.j, inst.m()) ^
                      BitVector::basis(eq.k, inst.m());
        clauses.push_back({z, eq.c, eq.weight, eq.c});
    }
    return TransversalGame::make(inst.m(), std::move(clauses));
}

LinearStrategy witness_to_linear(const BitVector& w) { return {w, 0}; }

BitVector linear_to_witness(const LinearStrategy& strat) {
    const int m = strat.u.length();
    std::uint32_t word = strat.u.word();
    if (strat.gamma_alice) word ^= (std::uint32_t{1} << m) - 1;
    return BitVector(m, word);
}

namespace {

// Distinct unsorted triple from [1, m].
std::tuple<int, int, int> random_triple(int m, Rng& rng) {
    int i = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m));
    int j = i;
    while (j == i) j = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m));
    int k = i;
    while (k == i || k == j)
        k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m));
    return {i, j, k};
}

void check_gen_bounds(int m, int eqs) {
    if (m < kMinInstanceLength || m > kMaxLength)
        throw capacity_error("generator needs " + std::to_string(kMinInstanceLength) +
                             " <= m <= " + std::to_string(kMaxLength) + ", got " +
                             std::to_string(m));
    if (eqs < 1) throw capacity_error("generator needs at least one equation");
}

}  // namespace

std::pair<ThreeLinInstance, BitVector> gen_planted_instance(int m, int eqs, Rng& rng) {
    check_gen_bounds(m, eqs);
    BitVector hidden(m, rng.next_bits(m));
    std::vector<ThreeLinEquation> equations;
    equations.reserve(eqs);
    const double weight = 1.0 / eqs;
    for (int n = 0; n < eqs; ++n) {
        auto [i, j, k] = random_triple(m, rng);
        int c = hidden.bit(i) ^ hidden.bit(j) ^ hidden.bit(k);
        equations.push_back({i, j, k, c, weight});
    }
    return {ThreeLinInstance::make(m, std::move(equations)), hidden};
}

ThreeLinInstance gen_contradictory_instance(int m, int eqs, Rng& rng) {
    check_gen_bounds(m, eqs);
    if (eqs % 2 != 0)
        throw capacity_error("contradictory generator needs an even equation count");
    std::vector<ThreeLinEquation> equations;
    equations.reserve(eqs);
    const double weight = 1.0 / eqs;
    for (int n = 0; n < eqs / 2; ++n) {
        auto [i, j, k] = random_triple(m, rng);
        equations.push_back({i, j, k, 0, weight});
        equations.push_back({i, j, k, 1, weight});
    }
    return ThreeLinInstance::make(m, std::move(equations));
}

ThreeLinInstance gen_random_instance(int m, int eqs, Rng& rng) {
    check_gen_bounds(m, eqs);
    std::vector<ThreeLinEquation> equations;
    equations.reserve(eqs);
    const double weight = 1.0 / eqs;
    for (int n = 0; n < eqs; ++n) {
        auto [i, j, k] = random_triple(m, rng);
        equations.push_back({i, j, k, rng.next_bit(), weight});
    }
    return ThreeLinInstance::make(m, std::move(equations));
}

namespace {

bool tl_skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string tl_strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

ThreeLinInstance load_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty file, expected '3lin v1'");
    ++line_no;
    if (tl_strip_cr(line) != "3lin v1") throw parse_error(1, "expected header '3lin v1'");

    int m = -1;
    std::vector<ThreeLinEquation> equations;
    while (std::getline(in, line)) {
        ++line_no;
        line = tl_strip_cr(line);
        if (tl_skippable(line)) continue;
        std::istringstream stream(line);
        std::string head;
        stream >> head;
        if (m < 0) {
            if (head != "m" || !(stream >> m) || m < kMinInstanceLength || m > kMaxLength)
                throw parse_error(line_no, "expected 'm <" +
                                               std::to_string(kMinInstanceLength) + ".." +
                                               std::to_string(kMaxLength) + ">'");
            continue;
        }
        if (head != "eq") throw parse_error(line_no, "expected 'eq <i> <j> <k> <c> <weight>'");
        ThreeLinEquation eq;
        if (!(stream >> eq.i >> eq.j >> eq.k >> eq.c >> eq.weight))
            throw parse_error(line_no, "expected 'eq <i> <j> <k> <c> <weight>'");
        std::string extra;
        if (stream >> extra) throw parse_error(line_no, "trailing data '" + extra + "'");
        if (eq.i < 1 || eq.i > m || eq.j < 1 || eq.j > m || eq.k < 1 || eq.k > m)
            throw parse_error(line_no, "index outside [1, " + std::to_string(m) + "]");
        if (eq.i == eq.j || eq.j == eq.k || eq.i == eq.k)
            throw parse_error(line_no, "indices must be distinct");
        if (eq.c != 0 && eq.c != 1) throw parse_error(line_no, "right-hand side must be 0 or 1");
        if (!std::isfinite(eq.weight) || eq.weight < 0.0)
            throw parse_error(line_no, "weight must be a non-negative number");
        equations.push_back(eq);
    }
    if (m < 0) throw parse_error(line_no + 1, "missing 'm <integer>' line");
    if (equations.empty()) throw parse_error(line_no + 1, "instance has no equations");
    try {
        return ThreeLinInstance::make(m, std::move(equations));
    } catch (const validation_error& e) {
        throw parse_error(line_no, e.what());
    }
}

ThreeLinInstance load_instance_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw validation_error("cannot open '" + path + "'");
    return load_instance(file);
}

void save_instance(const ThreeLinInstance& inst, std::ostream& out, const std::string& comment) {
    out << "3lin v1\n";
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "m " << inst.m() << "\n";
    char buffer[64];
    for (const auto& eq : inst.equations()) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", eq.weight);
        out << "eq " << eq.i << " " << eq.j << " " << eq.k << " " << eq.c << " " << buffer
            << "\n";
    }
}

}  // namespace txg
