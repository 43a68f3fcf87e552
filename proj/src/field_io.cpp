#include "nsv/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nsv/spectral_ops.hpp"

namespace nsv {

namespace {

constexpr const char* kMagic = "nsv-field";
constexpr int kVersion = 1;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, int line) {
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw FormatError("line " + std::to_string(line) + ": bad number '" + token + "'");
    }
    return v;
}

long parse_int(const std::string& token, int line) {
    long v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw FormatError("line " + std::to_string(line) + ": bad integer '" + token + "'");
    }
    return v;
}

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    std::vector<std::string> next() {
        std::string text;
        while (std::getline(is_, text)) {
            ++line_;
            std::istringstream ss(text);
            std::vector<std::string> tokens;
            for (std::string t; ss >> t;) tokens.push_back(t);
            if (!tokens.empty()) return tokens;
        }
        throw FormatError("unexpected end of snapshot after line " + std::to_string(line_));
    }

    std::vector<std::string> expect(const std::string& key, std::size_t values) {
        auto tokens = next();
        if (tokens[0] != key || tokens.size() != values + 1) {
            throw FormatError("line " + std::to_string(line_) + ": expected '" + key + "' with " +
                              std::to_string(values) + " value(s)");
        }
        return tokens;
    }

    int line() const noexcept { return line_; }

private:
    std::istream& is_;
    int line_ = 0;
};

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& snap) {
    const auto& f = snap.field;
    const auto& grid = f.grid();
    std::vector<std::string> rows;
    for (int c = 0; c < f.components(); ++c) {
        for (int idx : grid.active()) {
            const Complex v = f.component(c)[idx];
            if (v == Complex{}) continue;
            const WaveVector k = grid.wave(idx);
            rows.push_back(std::to_string(c) + ' ' + std::to_string(k.k1) + ' ' +
                           std::to_string(k.k2) + ' ' + format_double(v.real()) + ' ' +
                           format_double(v.imag()));
        }
    }
    os << kMagic << ' ' << kVersion << '\n'
       << "resolution_n " << grid.resolution() << '\n'
       << "dealias_cutoff " << grid.cutoff() << '\n'
       << "role " << to_string(f.role()) << '\n'
       << "alpha " << format_double(snap.alpha) << '\n';
    if (snap.time) os << "time " << format_double(*snap.time) << '\n';
    os << "rows " << rows.size() << '\n' << "component k1 k2 re im\n";
    for (const auto& r : rows) os << r << '\n';
    os << "end\n";
}

Snapshot read_snapshot(std::istream& is) {
    LineReader in(is);
    auto magic = in.expect(kMagic, 1);
    if (parse_int(magic[1], in.line()) != kVersion) {
        throw FormatError("unsupported snapshot version " + magic[1]);
    }
    const int n = static_cast<int>(parse_int(in.expect("resolution_n", 1)[1], in.line()));
    const int cutoff = static_cast<int>(parse_int(in.expect("dealias_cutoff", 1)[1], in.line()));
    const Role role = role_from_string(in.expect("role", 1)[1]);
    const double alpha = parse_double(in.expect("alpha", 1)[1], in.line());

    std::optional<double> time;
    auto tokens = in.next();
    if (tokens[0] == "time" && tokens.size() == 2) {
        time = parse_double(tokens[1], in.line());
        tokens = in.next();
    }
    if (tokens[0] != "rows" || tokens.size() != 2) {
        throw FormatError("line " + std::to_string(in.line()) + ": expected 'rows'");
    }
    const long rows = parse_int(tokens[1], in.line());
    tokens = in.next();
    if (tokens != std::vector<std::string>{"component", "k1", "k2", "re", "im"}) {
        throw FormatError("line " + std::to_string(in.line()) + ": expected column header");
    }

    Snapshot snap{SpectralField(SpectralGrid(n, cutoff), role), alpha, time};
    auto& f = snap.field;
    for (long r = 0; r < rows; ++r) {
        tokens = in.next();
        if (tokens.size() != 5) {
            throw FormatError("line " + std::to_string(in.line()) + ": expected 5 columns");
        }
        const long c = parse_int(tokens[0], in.line());
        const WaveVector k{static_cast<int>(parse_int(tokens[1], in.line())),
                           static_cast<int>(parse_int(tokens[2], in.line()))};
        if (c < 0 || c >= f.components() || !f.grid().retained(k) || k.is_zero()) {
            throw FormatError("line " + std::to_string(in.line()) + ": mode out of range");
        }
        f(static_cast<int>(c), k) = {parse_double(tokens[3], in.line()),
                                     parse_double(tokens[4], in.line())};
    }
    if (in.next() != std::vector<std::string>{"end"}) {
        throw FormatError("line " + std::to_string(in.line()) + ": expected 'end'");
    }
    if (symmetry_defect(f) > 1e-12) {
        throw FormatError("snapshot coefficients are not conjugate symmetric");
    }
    return snap;
}

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path.string() + "' for writing");
    write_snapshot(os, snap);
    if (!os) throw Error("failed writing '" + path.string() + "'");
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open '" + path.string() + "'");
    return read_snapshot(is);
}

}  // namespace nsv
