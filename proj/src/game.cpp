#include "txg/game.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "txg/errors.hpp"
#include "txg/fwht.hpp"

namespace txg {

TransversalGame TransversalGame::make(int m, std::vector<GameClause> raw) {
    if (m < 1 || m > kMaxLength)
        throw validation_error("game length " + std::to_string(m) + " outside [1, " +
                               std::to_string(kMaxLength) + "]");
    std::vector<GameClause> merged;
    merged.reserve(raw.size());
    std::map<std::pair<std::uint32_t, int>, std::size_t> index;
    for (auto& clause : raw) {
        if (clause.z.length() != m)
            throw validation_error("clause offset length " + std::to_string(clause.z.length()) +
                                   " does not match game length " + std::to_string(m));
        if (clause.r < 0)
            throw validation_error("clause label " + std::to_string(clause.r) + " is negative");
        if (!(clause.weight >= 0.0))
            throw validation_error("clause weight " + std::to_string(clause.weight) +
                                   " is negative");
        if (clause.gbit != 0 && clause.gbit != 1)
            throw validation_error("clause g-bit must be 0 or 1");
        auto key = std::make_pair(clause.z.word(), clause.r);
        auto found = index.find(key);
        if (found == index.end()) {
            index.emplace(key, merged.size());
            merged.push_back(clause);
        } else {
            GameClause& existing = merged[found->second];
            if (existing.gbit != clause.gbit)
                throw validation_error("conflicting g-bit for offset " + clause.z.str() +
                                       " label " + std::to_string(clause.r));
            existing.weight += clause.weight;
        }
    }
    double total = 0.0;
    for (const auto& clause : merged) total += clause.weight;
    if (std::abs(total - 1.0) > 1e-9)
        throw validation_error("clause weights sum to " + std::to_string(total) +
                               ", more than 1e-9 from 1");
    for (auto& clause : merged) clause.weight /= total;
    return TransversalGame(m, std::move(merged));
}

std::vector<double> theta_of(const TransversalGame& game) {
    std::vector<double> theta(std::size_t{1} << game.m(), 0.0);
    for (const auto& clause : game.clauses())
        theta[clause.z.word()] += clause.weight * 0.5 * (clause.gbit ? -1.0 : 1.0);
    return theta;
}

GameAnalysis analyze(const TransversalGame& game) {
    GameAnalysis result{theta_of(game), {}, BitVector::zero(game.m()), 0, 0.0};
    result.lambda = fwht(result.theta);
    std::uint32_t best = 0;
    double best_abs = std::abs(result.lambda[0]);
    for (std::uint32_t u = 1; u < result.lambda.size(); ++u) {
        double a = std::abs(result.lambda[u]);
        if (a > best_abs) {
            best_abs = a;
            best = u;
        }
    }
    result.u_star = BitVector(game.m(), best);
    result.gamma_star = result.lambda[best] >= 0.0 ? 0 : 1;
    result.value = 0.5 + best_abs;
    return result;
}

Eigen::MatrixXd phi_matrix(const TransversalGame& game) {
    const int m = game.m();
    if (m > kMaxDenseLength)
        throw capacity_error("dense operator needs m <= " + std::to_string(kMaxDenseLength) +
                             ", got " + std::to_string(m));
    const std::uint32_t n = std::uint32_t{1} << m;
    std::vector<double> theta = theta_of(game);
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
    for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t z = 0; z < n; ++z) phi(s, s ^ z) = theta[z];
    return phi;
}

SpectrumReport verify_spectrum(const TransversalGame& game) {
    const int m = game.m();
    const std::uint32_t n = std::uint32_t{1} << m;
    Eigen::MatrixXd phi = phi_matrix(game);
    std::vector<double> lambda = fwht(theta_of(game));

    Eigen::MatrixXd hadamard(n, n);
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t u = 0; u < n; ++u)
            hadamard(v, u) = (std::popcount(u & v) & 1) ? -1.0 : 1.0;

    Eigen::MatrixXd image = phi * hadamard;
    const double scale = std::sqrt(static_cast<double>(n));
    SpectrumReport report;
    for (std::uint32_t u = 0; u < n; ++u) {
        double residual = (image.col(u) - lambda[u] * hadamard.col(u)).norm() / scale;
        if (residual > report.max_residual) report.max_residual = residual;
    }

    double lambda_max = 0.0;
    for (double value : lambda) lambda_max = std::max(lambda_max, std::abs(value));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(phi, Eigen::EigenvaluesOnly);
    double operator_norm = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        operator_norm = std::max(operator_norm, std::abs(solver.eigenvalues()[i]));
    report.norm_gap = std::abs(lambda_max - operator_norm);
    return report;
}

namespace {

// Splits a line into whitespace-separated tokens.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;  // blank
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

long parse_int(const std::string& token, int line_no, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        throw parse_error(line_no, std::string(what) + " '" + token + "' is not an integer");
    }
    if (used != token.size())
        throw parse_error(line_no, std::string(what) + " '" + token + "' is not an integer");
    return value;
}

double parse_weight(const std::string& token, int line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw parse_error(line_no, "weight '" + token + "' is not a number");
    }
    if (used != token.size() || !std::isfinite(value))
        throw parse_error(line_no, "weight '" + token + "' is not a number");
    return value;
}

// Extracts the value of a "key=value" token or fails with the line number.
std::string keyed(const std::string& token, const char* key, int line_no) {
    std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
        throw parse_error(line_no, "expected " + prefix + "..., got '" + token + "'");
    return token.substr(prefix.size());
}

}  // namespace

TransversalGame load_game(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty file, expected 'txg v1'");
    ++line_no;
    if (strip_cr(line) != "txg v1") throw parse_error(1, "expected header 'txg v1'");

    int m = -1;
    std::vector<GameClause> clauses;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (skippable(line)) continue;
        auto tokens = tokenize(line);
        if (m < 0) {
            if (tokens.size() != 2 || tokens[0] != "m")
                throw parse_error(line_no, "expected 'm <integer>'");
            long value = parse_int(tokens[1], line_no, "m");
            if (value < 1 || value > kMaxLength)
                throw parse_error(line_no, "m " + tokens[1] + " outside [1, " +
                                               std::to_string(kMaxLength) + "]");
            m = static_cast<int>(value);
            continue;
        }
        if (tokens.size() != 5 || tokens[0] != "clause")
            throw parse_error(line_no, "expected 'clause z=... r=... g=... w=...'");
        GameClause clause{BitVector::zero(m), 0, 0.0, 0};
        std::string z_text = keyed(tokens[1], "z", line_no);
        try {
            clause.z = BitVector::parse(z_text);
        } catch (const validation_error& e) {
            throw parse_error(line_no, e.what());
        }
        if (clause.z.length() != m)
            throw parse_error(line_no, "offset '" + z_text + "' is not " + std::to_string(m) +
                                           " bits");
        long r = parse_int(keyed(tokens[2], "r", line_no), line_no, "label");
        if (r < 0) throw parse_error(line_no, "label r must be non-negative");
        clause.r = static_cast<int>(r);
        std::string g_text = keyed(tokens[3], "g", line_no);
        if (g_text != "0" && g_text != "1")
            throw parse_error(line_no, "g must be 0 or 1, got '" + g_text + "'");
        clause.gbit = g_text == "1" ? 1 : 0;
        clause.weight = parse_weight(keyed(tokens[4], "w", line_no), line_no);
        if (clause.weight < 0.0) throw parse_error(line_no, "weight must be non-negative");
        clauses.push_back(clause);
    }
    if (m < 0) throw parse_error(line_no + 1, "missing 'm <integer>' line");
    if (clauses.empty()) throw parse_error(line_no + 1, "game has no clauses");
    try {
        return TransversalGame::make(m, std::move(clauses));
    } catch (const validation_error& e) {
        throw parse_error(line_no, e.what());
    }
}

TransversalGame load_game_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw validation_error("cannot open '" + path + "'");
    return load_game(file);
}

void save_game(const TransversalGame& game, std::ostream& out) {
    out << "txg v1\n";
    out << "m " << game.m() << "\n";
    char buffer[64];
    for (const auto& clause : game.clauses()) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", clause.weight);
        out << "clause z=" << clause.z.str() << " r=" << clause.r << " g=" << clause.gbit
            << " w=" << buffer << "\n";
    }
}

}  // namespace txg
