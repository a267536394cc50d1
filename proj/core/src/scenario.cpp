#include "fracguide/scenario.hpp"

#include "fracguide/error.hpp"
#include "fracguide/expression.hpp"
#include "number_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <sstream>

namespace fracguide {

using detail::format_shortest;
using detail::parse_double;

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

namespace {

bool same_matrix(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same_vector(const Vector& a, const Vector& b) {
    return a.size() == b.size() && a == b;
}

bool same_points(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_vector);
}

}  // namespace

ActionSet SetSpec::build() const {
    if (ball) return ActionSet::ball(radius, dim);
    return ActionSet::finite(points);
}

bool operator==(const SetSpec& a, const SetSpec& b) {
    if (a.ball != b.ball) return false;
    if (a.ball) return a.radius == b.radius && a.dim == b.dim;
    return same_points(a.points, b.points);
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.dim == b.dim && a.drift == b.drift && same_matrix(a.B, b.B) && same_matrix(a.C, b.C) &&
           a.lambda_g == b.lambda_g && a.c_g == b.c_g && a.time_lipschitz == b.time_lipschitz &&
           a.alpha == b.alpha && a.horizon == b.horizon && a.P == b.P && a.Q == b.Q &&
           same_vector(a.x0, b.x0) && same_vector(a.y0, b.y0) && a.step == b.step &&
           a.nodes == b.nodes && a.substeps == b.substeps && a.disturbance == b.disturbance &&
           a.guide_u == b.guide_u && a.system_u == b.system_u && a.guide_v == b.guide_v &&
           a.eps == b.eps && a.csv_path == b.csv_path && a.meta_path == b.meta_path;
}

TimeGrid Scenario::partition() const {
    if (step) {
        if (!(*step > 0.0)) throw DomainError("partition step must be positive");
        const double ratio = horizon / *step;
        const double cells = std::round(ratio);
        if (cells < 1.0 || std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio)) {
            throw DomainError("partition step " + format_shortest(*step) +
                              " does not divide the horizon " + format_shortest(horizon));
        }
        return TimeGrid::uniform(horizon, static_cast<std::size_t>(cells));
    }
    TimeGrid grid = TimeGrid::from_nodes(nodes);
    return grid;
}

AimingConfig Scenario::build() const {
    if (dim < 1 || drift.size() != static_cast<std::size_t>(dim)) {
        throw DomainError("scenario needs one drift expression per state component");
    }
    auto compiled = std::make_shared<std::vector<Expression>>();
    for (const auto& src : drift) compiled->push_back(Expression::parse(src, dim));

    GameDynamics::Drift drift_fn = [compiled](double t, const Vector& x) {
        Vector out(static_cast<Eigen::Index>(compiled->size()));
        const std::span<const double> state(x.data(), static_cast<std::size_t>(x.size()));
        for (std::size_t i = 0; i < compiled->size(); ++i) {
            out[static_cast<Eigen::Index>(i)] = (*compiled)[i].eval(t, state);
        }
        return out;
    };
    if (B.rows() != dim || C.rows() != dim) {
        throw DomainError("B and C must have dim rows");
    }
    GameDynamics dyn = GameDynamics::separable_affine(std::move(drift_fn), B, C, lambda_g, c_g);
    if (time_lipschitz) dyn.with_time_lipschitz(*time_lipschitz);

    AimingConfig config{
        .dyn = std::move(dyn),
        .alpha = FracOrder(alpha),
        .horizon = horizon,
        .P = P.build(),
        .Q = Q.build(),
        .x0 = x0,
        .y0 = y0,
        .partition = partition(),
        .disturbance = disturbance,
        .guide_u = guide_u,
        .system_u = system_u,
        .guide_v = guide_v,
        .substeps = substeps,
        .eps = eps,
    };
    config.validate();
    return config;
}

void Scenario::reseed(std::uint64_t seed) {
    for (ControlPolicy* p : {&disturbance, &guide_u, &system_u, &guide_v}) {
        if (auto* r = std::get_if<SeededRandomPolicy>(p)) r->seed = seed;
    }
}

Scenario paper_scenario(std::uint64_t seed) {
    Scenario s;
    s.dim = 2;
    s.drift = {"x2", "-sin(x1) + cos(t)"};
    s.B = Matrix::Zero(2, 2);
    s.B.diagonal() << 0.3, 0.5;
    s.C = Matrix::Zero(2, 2);
    s.C.diagonal() << 0.4, 0.2;
    s.lambda_g = 1.0;
    s.c_g = 1.9;
    s.time_lipschitz = 1.0;
    s.alpha = 0.5;
    s.horizon = 5.0;
    s.P = SetSpec{true, 1.0, 2, {}};
    s.Q = SetSpec{true, 1.0, 2, {}};
    s.x0 = Vector(2);
    s.x0 << -1.0, 0.0;
    s.y0 = Vector(2);
    s.y0 << 0.0, 1.0;
    s.step = 0.0005;
    s.disturbance = SeededRandomPolicy{seed};
    s.guide_u = SeededRandomPolicy{seed};
    return s;
}

AimingConfig scenario_paper_example() { return paper_scenario().build(); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::vector<std::string> split_rows(const std::string& s) {
    std::vector<std::string> rows;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(';', start);
        rows.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return rows;
}

struct Entry {
    std::string value;
    int line;
};

class Document {
public:
    explicit Document(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        bool header_seen = false;
        std::string section;
        while (std::getline(in, raw)) {
            ++line_no;
            last_line_ = line_no;
            const auto hash = raw.find('#');
            const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            if (!header_seen) {
                if (line != kScenarioHeader) {
                    throw ParseError(line_no, std::string("expected header '") + kScenarioHeader + "'");
                }
                header_seen = true;
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
                section = trim(std::string_view(line).substr(1, line.size() - 2));
                if (!known_section(section)) throw ParseError(line_no, "unknown section [" + section + "]");
                if (section_lines_.count(section)) throw ParseError(line_no, "duplicate section [" + section + "]");
                section_lines_[section] = line_no;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
            if (section.empty()) throw ParseError(line_no, "key outside of any section");
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) throw ParseError(line_no, "empty key");
            const std::string full = section + "." + key;
            if (entries_.count(full)) throw ParseError(line_no, "duplicate key '" + key + "'");
            entries_[full] = Entry{value, line_no};
        }
        if (!header_seen) throw ParseError(std::max(1, line_no), "empty scenario file");
    }

    [[nodiscard]] const Entry* find(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const Entry& require(const std::string& key) {
        if (const Entry* e = find(key)) return *e;
        const auto dot = key.find('.');
        const std::string section = key.substr(0, dot);
        const auto it = section_lines_.find(section);
        const int line = it == section_lines_.end() ? last_line_ : it->second;
        throw ParseError(line, "missing key '" + key.substr(dot + 1) + "' in [" + section + "]");
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_) {
            if (!used_.count(key)) throw ParseError(entry.line, "unknown key '" + key + "'");
        }
    }

private:
    static bool known_section(const std::string& s) {
        static const char* names[] = {"dynamics", "order", "horizon", "sets", "initial",
                                      "partition", "policies", "output"};
        return std::any_of(std::begin(names), std::end(names), [&](const char* n) { return s == n; });
    }

    std::map<std::string, Entry> entries_;
    std::map<std::string, int> section_lines_;
    std::set<std::string> used_;
    int last_line_ = 1;
};

double to_number(const Entry& e, const std::string& token) {
    const auto v = parse_double(token);
    if (!v || !std::isfinite(*v)) throw ParseError(e.line, "not a finite number: '" + token + "'");
    return *v;
}

double number(const Entry& e) {
    const auto toks = split_ws(e.value);
    if (toks.size() != 1) throw ParseError(e.line, "expected a single number");
    return to_number(e, toks[0]);
}

int integer(const Entry& e) {
    const double v = number(e);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ParseError(e.line, "expected an integer");
    return static_cast<int>(v);
}

std::uint64_t seed_value(const Entry& e, const std::string& token) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError(e.line, "seed must be a non-negative integer, got '" + token + "'");
    }
    return v;
}

Vector vector_of(const Entry& e, const std::string& text) {
    const auto toks = split_ws(text);
    if (toks.empty()) throw ParseError(e.line, "expected a list of numbers");
    Vector v(static_cast<Eigen::Index>(toks.size()));
    for (std::size_t i = 0; i < toks.size(); ++i) v[static_cast<Eigen::Index>(i)] = to_number(e, toks[i]);
    return v;
}

std::vector<Vector> rows_of(const Entry& e, const std::string& text) {
    std::vector<Vector> rows;
    for (const auto& row : split_rows(text)) rows.push_back(vector_of(e, row));
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw ParseError(e.line, "rows differ in length");
    }
    return rows;
}

Matrix matrix_of(const Entry& e) {
    const auto rows = rows_of(e, e.value);
    Matrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return m;
}

SetSpec set_of(const Entry& e) {
    const auto toks = split_ws(e.value);
    if (toks.empty()) throw ParseError(e.line, "expected 'ball <radius> <dim>' or 'finite <points>'");
    SetSpec spec;
    if (toks[0] == "ball") {
        if (toks.size() != 3) throw ParseError(e.line, "expected 'ball <radius> <dim>'");
        spec.ball = true;
        spec.radius = to_number(e, toks[1]);
        const double d = to_number(e, toks[2]);
        if (!(spec.radius > 0.0)) throw ParseError(e.line, "ball radius must be positive");
        if (d < 1.0 || d != std::floor(d)) throw ParseError(e.line, "ball dimension must be a positive integer");
        spec.dim = static_cast<int>(d);
    } else if (toks[0] == "finite") {
        spec.ball = false;
        spec.points = rows_of(e, trim(std::string_view(e.value).substr(e.value.find("finite") + 6)));
        spec.dim = static_cast<int>(spec.points.front().size());
    } else {
        throw ParseError(e.line, "unknown set kind '" + toks[0] + "'");
    }
    return spec;
}

ControlPolicy policy_of(const Entry& e) {
    const auto toks = split_ws(e.value);
    if (toks.empty()) throw ParseError(e.line, "empty policy");
    const std::string& kind = toks[0];
    if (kind == "extremal") {
        if (toks.size() != 1) throw ParseError(e.line, "'extremal' takes no arguments");
        return ExtremalPolicy{};
    }
    if (kind == "adversarial") {
        if (toks.size() != 1) throw ParseError(e.line, "'adversarial' takes no arguments");
        return AdversarialPolicy{};
    }
    if (kind == "random") {
        if (toks.size() != 2) throw ParseError(e.line, "expected 'random <seed>'");
        return SeededRandomPolicy{seed_value(e, toks[1])};
    }
    if (kind == "fixed") {
        return FixedPolicy{rows_of(e, trim(std::string_view(e.value).substr(e.value.find("fixed") + 5)))};
    }
    throw ParseError(e.line, "unknown policy '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Document doc(text);
    Scenario s;

    if (const Entry* builtin = doc.find("dynamics.builtin")) {
        if (builtin->value != "paper") throw ParseError(builtin->line, "unknown builtin '" + builtin->value + "'");
        const Scenario ex = paper_scenario();
        s.dim = ex.dim;
        s.drift = ex.drift;
        s.B = ex.B;
        s.C = ex.C;
        s.lambda_g = ex.lambda_g;
        s.c_g = ex.c_g;
        s.time_lipschitz = ex.time_lipschitz;
    } else {
        const Entry& kind = doc.require("dynamics.kind");
        if (kind.value != "separable_affine") {
            throw ParseError(kind.line, "only separable_affine dynamics can be described in a file");
        }
        const Entry& dim = doc.require("dynamics.dim");
        s.dim = integer(dim);
        if (s.dim < 1) throw ParseError(dim.line, "dim must be positive");
        for (int i = 1; i <= s.dim; ++i) {
            const Entry& d = doc.require("dynamics.drift_" + std::to_string(i));
            try {
                (void)Expression::parse(d.value, s.dim);
            } catch (const DomainError& err) {
                throw ParseError(d.line, err.what());
            }
            s.drift.push_back(d.value);
        }
        const Entry& B = doc.require("dynamics.B");
        s.B = matrix_of(B);
        if (s.B.rows() != s.dim) throw ParseError(B.line, "B must have dim rows");
        const Entry& C = doc.require("dynamics.C");
        s.C = matrix_of(C);
        if (s.C.rows() != s.dim) throw ParseError(C.line, "C must have dim rows");
        const Entry& lg = doc.require("dynamics.lambda_g");
        s.lambda_g = number(lg);
        if (!(s.lambda_g > 0.0)) throw ParseError(lg.line, "lambda_g must be positive");
        const Entry& cg = doc.require("dynamics.c_g");
        s.c_g = number(cg);
        if (!(s.c_g > 0.0)) throw ParseError(cg.line, "c_g must be positive");
        if (const Entry* tl = doc.find("dynamics.time_lipschitz")) {
            s.time_lipschitz = number(*tl);
            if (!(*s.time_lipschitz >= 0.0)) throw ParseError(tl->line, "time_lipschitz must be >= 0");
        }
    }

    const Entry& alpha = doc.require("order.alpha");
    s.alpha = number(alpha);
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ParseError(alpha.line, "alpha must lie in (0, 1)");

    const Entry& T = doc.require("horizon.T");
    s.horizon = number(T);
    if (!(s.horizon > 0.0)) throw ParseError(T.line, "T must be positive");

    const Entry& P = doc.require("sets.P");
    s.P = set_of(P);
    if (s.P.dim != s.B.cols()) throw ParseError(P.line, "P dimension differs from the columns of B");
    const Entry& Q = doc.require("sets.Q");
    s.Q = set_of(Q);
    if (s.Q.dim != s.C.cols()) throw ParseError(Q.line, "Q dimension differs from the columns of C");

    const Entry& x0 = doc.require("initial.x0");
    s.x0 = vector_of(x0, x0.value);
    if (s.x0.size() != s.dim) throw ParseError(x0.line, "x0 must have dim components");
    const Entry& y0 = doc.require("initial.y0");
    s.y0 = vector_of(y0, y0.value);
    if (s.y0.size() != s.dim) throw ParseError(y0.line, "y0 must have dim components");

    const Entry* step = doc.find("partition.step");
    const Entry* nodes = doc.find("partition.nodes");
    if ((step != nullptr) == (nodes != nullptr)) {
        const Entry* at = step ? step : nodes;
        throw ParseError(at ? at->line : 1, "[partition] needs exactly one of 'step' or 'nodes'");
    }
    try {
        if (step) {
            s.step = number(*step);
        } else {
            const Vector v = vector_of(*nodes, nodes->value);
            s.nodes.assign(v.data(), v.data() + v.size());
        }
        const TimeGrid grid = s.partition();
        if (std::abs(grid.horizon() - s.horizon) > 1e-12 * s.horizon) {
            throw DomainError("partition does not end at T");
        }
    } catch (const DomainError& err) {
        throw ParseError(step ? step->line : nodes->line, err.what());
    }
    if (const Entry* sub = doc.find("partition.substeps")) {
        s.substeps = integer(*sub);
        if (s.substeps < 1) throw ParseError(sub->line, "substeps must be >= 1");
    }

    const ActionSet P_set = s.P.build();
    const ActionSet Q_set = s.Q.build();
    const std::size_t cells = s.partition().cells();
    const auto checked = [&](const Entry& e, const ActionSet& set) {
        ControlPolicy p = policy_of(e);
        if (const auto* fixed = std::get_if<FixedPolicy>(&p)) {
            if (fixed->values.size() != 1 && fixed->values.size() != cells) {
                throw ParseError(e.line, "fixed policy needs 1 or " + std::to_string(cells) + " rows");
            }
            for (const Vector& v : fixed->values) {
                if (!set.contains(v)) throw ParseError(e.line, "fixed policy value outside its action set");
            }
        }
        return p;
    };
    s.disturbance = checked(doc.require("policies.disturbance"), Q_set);
    s.guide_u = checked(doc.require("policies.guide_u"), P_set);
    if (const Entry* e = doc.find("policies.system_u")) s.system_u = checked(*e, P_set);
    if (const Entry* e = doc.find("policies.guide_v")) s.guide_v = checked(*e, Q_set);
    if (const Entry* e = doc.find("policies.eps")) {
        s.eps = number(*e);
        if (!(s.eps > 0.0)) throw ParseError(e->line, "eps must be positive");
    }

    if (const Entry* e = doc.find("output.csv")) s.csv_path = e->value;
    if (const Entry* e = doc.find("output.meta")) s.meta_path = e->value;

    doc.reject_unused();

    try {
        (void)s.build();
    } catch (const DomainError& err) {
        throw ParseError(doc.require("policies.disturbance").line, err.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

namespace {

std::string join(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_shortest(v[i]);
    }
    return out;
}

std::string join_rows(const std::vector<Vector>& rows) {
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += "; ";
        out += join(rows[i]);
    }
    return out;
}

std::string join_matrix(const Matrix& m) {
    std::vector<Vector> rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).transpose());
    return join_rows(rows);
}

std::string set_text(const SetSpec& s) {
    if (s.ball) return "ball " + format_shortest(s.radius) + " " + std::to_string(s.dim);
    return "finite " + join_rows(s.points);
}

std::string policy_text(const ControlPolicy& p) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ExtremalPolicy>) return "extremal";
            else if constexpr (std::is_same_v<T, AdversarialPolicy>) return "adversarial";
            else if constexpr (std::is_same_v<T, SeededRandomPolicy>) return "random " + std::to_string(v.seed);
            else return "fixed " + join_rows(v.values);
        },
        p);
}

}  // namespace

std::string write_scenario(const Scenario& s) {
    std::ostringstream out;
    out << kScenarioHeader << "\n";
    out << "[dynamics]\n";
    out << "kind = separable_affine\n";
    out << "dim = " << s.dim << "\n";
    for (std::size_t i = 0; i < s.drift.size(); ++i) out << "drift_" << i + 1 << " = " << s.drift[i] << "\n";
    out << "B = " << join_matrix(s.B) << "\n";
    out << "C = " << join_matrix(s.C) << "\n";
    out << "lambda_g = " << format_shortest(s.lambda_g) << "\n";
    out << "c_g = " << format_shortest(s.c_g) << "\n";
    if (s.time_lipschitz) out << "time_lipschitz = " << format_shortest(*s.time_lipschitz) << "\n";
    out << "[order]\nalpha = " << format_shortest(s.alpha) << "\n";
    out << "[horizon]\nT = " << format_shortest(s.horizon) << "\n";
    out << "[sets]\nP = " << set_text(s.P) << "\nQ = " << set_text(s.Q) << "\n";
    out << "[initial]\nx0 = " << join(s.x0) << "\ny0 = " << join(s.y0) << "\n";
    out << "[partition]\n";
    if (s.step) {
        out << "step = " << format_shortest(*s.step) << "\n";
    } else {
        out << "nodes = " << join(Eigen::Map<const Vector>(s.nodes.data(), static_cast<Eigen::Index>(s.nodes.size()))) << "\n";
    }
    out << "substeps = " << s.substeps << "\n";
    out << "[policies]\n";
    out << "disturbance = " << policy_text(s.disturbance) << "\n";
    out << "guide_u = " << policy_text(s.guide_u) << "\n";
    out << "system_u = " << policy_text(s.system_u) << "\n";
    out << "guide_v = " << policy_text(s.guide_v) << "\n";
    out << "eps = " << format_shortest(s.eps) << "\n";
    if (!s.csv_path.empty() || !s.meta_path.empty()) {
        out << "[output]\n";
        if (!s.csv_path.empty()) out << "csv = " << s.csv_path << "\n";
        if (!s.meta_path.empty()) out << "meta = " << s.meta_path << "\n";
    }
    return out.str();
}

}  // namespace fracguide
