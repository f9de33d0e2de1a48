#include "txg/quantum.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "txg/errors.hpp"

namespace txg {

void QuantumStrategy::validate() const {
    if (m < 1 || m > kMaxLength)
        throw validation_error("quantum strategy question length " + std::to_string(m) +
                               " outside [1, " + std::to_string(kMaxLength) + "]");
    if (d < 1 || d > 4)
        throw validation_error("local dimension " + std::to_string(d) + " outside [1, 4]");
    if (state.size() != static_cast<Eigen::Index>(d) * d)
        throw validation_error("state has " + std::to_string(state.size()) +
                               " amplitudes, expected " + std::to_string(d * d));
    if (std::abs(state.norm() - 1.0) > 1e-12)
        throw validation_error("state norm differs from 1 by more than 1e-12");
    const std::size_t n = std::size_t{1} << m;
    if (alice_obs.size() != n || bob_obs.size() != n)
        throw validation_error("need one observable per question on each side");
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(d, d);
    for (const auto* side : {&alice_obs, &bob_obs}) {
        for (const auto& obs : *side) {
            if (obs.rows() != d || obs.cols() != d)
                throw validation_error("observable is not " + std::to_string(d) + "x" +
                                       std::to_string(d));
            if ((obs - obs.adjoint()).norm() > 1e-10)
                throw validation_error("observable is not Hermitian within 1e-10");
            if ((obs * obs - identity).norm() > 1e-10)
                throw validation_error("observable squared differs from identity by more "
                                       "than 1e-10");
        }
    }
}

double eval_quantum(const TransversalGame& game, const QuantumStrategy& strat) {
    if (strat.m != game.m())
        throw dimension_error("strategy question length " + std::to_string(strat.m) +
                              " does not match game length " + std::to_string(game.m()));
    strat.validate();
    const int d = strat.d;
    const std::uint32_t n = std::uint32_t{1} << game.m();

    // <phi| A (x) B |phi> = tr(M* A M B^T) with M the state reshaped d x d.
    Eigen::MatrixXcd state_matrix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) state_matrix(i, j) = strat.state(i * d + j);

    // E(s,t) for all pairs; clause loop reads from the table.
    std::vector<double> correlation(static_cast<std::size_t>(n) * n);
    double max_imag = 0.0;
    for (std::uint32_t s = 0; s < n; ++s) {
        Eigen::MatrixXcd left = state_matrix.adjoint() * strat.alice_obs[s] * state_matrix;
        for (std::uint32_t t = 0; t < n; ++t) {
            std::complex<double> e = (left * strat.bob_obs[t].transpose()).trace();
            max_imag = std::max(max_imag, std::abs(e.imag()));
            correlation[static_cast<std::size_t>(s) * n + t] = e.real();
        }
    }
    if (max_imag > 1e-8)
        throw numerical_error("imaginary residue " + std::to_string(max_imag) +
                              " above 1e-8");

    double total = 0.0;
    for (const auto& clause : game.clauses()) {
        const std::uint32_t z = clause.z.word();
        const double sign = clause.gbit ? -1.0 : 1.0;
        double inner = 0.0;
        for (std::uint32_t s = 0; s < n; ++s)
            inner += 0.5 * (1.0 + sign * correlation[static_cast<std::size_t>(s) * n + (s ^ z)]);
        total += clause.weight * inner;
    }
    return total / static_cast<double>(n);
}

QuantumStrategy embed_deterministic(const std::vector<std::uint8_t>& alice,
                                    const std::vector<std::uint8_t>& bob, int m) {
    QuantumStrategy strat;
    strat.m = m;
    strat.d = 1;
    strat.state = Eigen::VectorXcd::Ones(1);
    const std::size_t n = std::size_t{1} << m;
    strat.alice_obs.resize(n);
    strat.bob_obs.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        strat.alice_obs[q] = Eigen::MatrixXcd::Constant(1, 1, alice[q] ? -1.0 : 1.0);
        strat.bob_obs[q] = Eigen::MatrixXcd::Constant(1, 1, bob[q] ? -1.0 : 1.0);
    }
    return strat;
}

namespace {

Eigen::MatrixXcd random_gaussian_matrix(int d, Rng& rng) {
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            g(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    return g;
}

// QR of a complex Gaussian matrix, columns rephased so the R diagonal is
// positive real. This makes the distribution Haar and the output a pure
// function of the draws.
Eigen::MatrixXcd random_unitary(int d, Rng& rng) {
    Eigen::MatrixXcd g = random_gaussian_matrix(d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        std::complex<double> diag = r(i, i);
        double mag = std::abs(diag);
        std::complex<double> phase = mag > 0.0 ? diag / mag : std::complex<double>(1.0);
        q.col(i) *= phase;
    }
    return q;
}

Eigen::MatrixXcd random_observable(int d, Rng& rng) {
    Eigen::MatrixXcd u = random_unitary(d, rng);
    Eigen::VectorXd signs(d);
    for (int i = 0; i < d; ++i) signs(i) = rng.next_bit() ? -1.0 : 1.0;
    Eigen::MatrixXcd obs = u * signs.asDiagonal() * u.adjoint();
    // Symmetrize away the last-ulp Hermiticity residue.
    return 0.5 * (obs + obs.adjoint().eval());
}

}  // namespace

QuantumStrategy random_quantum_strategy(int m, int d, Rng& rng) {
    if (d < 2 || d > 4)
        throw validation_error("random strategies need 2 <= d <= 4, got " + std::to_string(d));
    QuantumStrategy strat;
    strat.m = m;
    strat.d = d;
    strat.state = Eigen::VectorXcd(d * d);
    for (int i = 0; i < d * d; ++i)
        strat.state(i) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    strat.state.normalize();
    const std::size_t n = std::size_t{1} << m;
    strat.alice_obs.reserve(n);
    strat.bob_obs.reserve(n);
    for (std::size_t q = 0; q < n; ++q) strat.alice_obs.push_back(random_observable(d, rng));
    for (std::size_t q = 0; q < n; ++q) strat.bob_obs.push_back(random_observable(d, rng));
    return strat;
}

namespace {

bool io_skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string io_strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

Eigen::MatrixXcd parse_matrix(std::istringstream& in, int d, int line_no) {
    Eigen::MatrixXcd matrix(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
                throw parse_error(line_no, "expected " + std::to_string(2 * d * d) +
                                               " decimals of matrix data");
            matrix(i, j) = std::complex<double>(re, im);
        }
    }
    std::string extra;
    if (in >> extra) throw parse_error(line_no, "trailing data '" + extra + "'");
    return matrix;
}

}  // namespace

QuantumStrategy load_quantum_strategy(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty file, expected 'qstrat v1'");
    ++line_no;
    if (io_strip_cr(line) != "qstrat v1") throw parse_error(1, "expected header 'qstrat v1'");

    QuantumStrategy strat;
    strat.d = -1;
    int m = -1;
    std::map<std::uint32_t, Eigen::MatrixXcd> alice, bob;
    bool have_state = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = io_strip_cr(line);
        if (io_skippable(line)) continue;
        std::istringstream stream(line);
        std::string head;
        stream >> head;
        if (strat.d < 0) {
            int d = 0;
            if (head != "d" || !(stream >> d) || d < 1 || d > 4)
                throw parse_error(line_no, "expected 'd <1..4>'");
            strat.d = d;
            continue;
        }
        if (head == "state") {
            strat.state = Eigen::VectorXcd(strat.d * strat.d);
            for (int i = 0; i < strat.d * strat.d; ++i) {
                double re = 0.0, im = 0.0;
                if (!(stream >> re >> im))
                    throw parse_error(line_no, "expected " + std::to_string(2 * strat.d * strat.d) +
                                                   " decimals of state data");
                strat.state(i) = std::complex<double>(re, im);
            }
            std::string extra;
            if (stream >> extra) throw parse_error(line_no, "trailing data '" + extra + "'");
            have_state = true;
            continue;
        }
        if (head == "A" || head == "B") {
            std::string keyed;
            stream >> keyed;
            const std::string prefix = head == "A" ? "s=" : "t=";
            if (keyed.rfind(prefix, 0) != 0)
                throw parse_error(line_no, "expected " + prefix + "<bitstring>");
            BitVector question = BitVector::zero(1);
            try {
                question = BitVector::parse(keyed.substr(prefix.size()));
            } catch (const validation_error& e) {
                throw parse_error(line_no, e.what());
            }
            if (m < 0)
                m = question.length();
            else if (question.length() != m)
                throw parse_error(line_no, "question length changed mid-file");
            auto& side = head == "A" ? alice : bob;
            if (!side.emplace(question.word(), parse_matrix(stream, strat.d, line_no)).second)
                throw parse_error(line_no, "duplicate observable for question " + question.str());
            continue;
        }
        throw parse_error(line_no, "unrecognized line '" + head + "'");
    }
    if (strat.d < 0) throw parse_error(line_no + 1, "missing 'd' line");
    if (!have_state) throw parse_error(line_no + 1, "missing 'state' line");
    if (m < 0) throw parse_error(line_no + 1, "no observables");
    strat.m = m;
    const std::size_t n = std::size_t{1} << m;
    if (alice.size() != n || bob.size() != n)
        throw parse_error(line_no + 1, "need an A and a B observable for all " +
                                           std::to_string(n) + " questions");
    strat.alice_obs.reserve(n);
    strat.bob_obs.reserve(n);
    for (std::uint32_t q = 0; q < n; ++q) {
        strat.alice_obs.push_back(alice.at(q));
        strat.bob_obs.push_back(bob.at(q));
    }
    strat.validate();
    return strat;
}

QuantumStrategy load_quantum_strategy_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw validation_error("cannot open '" + path + "'");
    return load_quantum_strategy(file);
}

namespace {

void write_complex_row(std::ostream& out, const Eigen::MatrixXcd& matrix) {
    char buffer[128];
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            std::snprintf(buffer, sizeof(buffer), " %.17g %.17g", matrix(i, j).real(),
                          matrix(i, j).imag());
            out << buffer;
        }
}

}  // namespace

void save_quantum_strategy(const QuantumStrategy& strat, std::ostream& out) {
    out << "qstrat v1\n";
    out << "d " << strat.d << "\n";
    out << "state";
    char buffer[128];
    for (Eigen::Index i = 0; i < strat.state.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), " %.17g %.17g", strat.state(i).real(),
                      strat.state(i).imag());
        out << buffer;
    }
    out << "\n";
    const std::uint32_t n = std::uint32_t{1} << strat.m;
    for (std::uint32_t q = 0; q < n; ++q) {
        out << "A s=" << BitVector(strat.m, q).str();
        write_complex_row(out, strat.alice_obs[q]);
        out << "\n";
    }
    for (std::uint32_t q = 0; q < n; ++q) {
        out << "B t=" << BitVector(strat.m, q).str();
        write_complex_row(out, strat.bob_obs[q]);
        out << "\n";
    }
}

}  // namespace txg
