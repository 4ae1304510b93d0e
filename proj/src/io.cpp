#include "carleson_lab/io.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <set>
#include <sstream>

namespace clab {

namespace {

using json = nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("domain: unknown key '" + key + "'");
    }
}

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("domain: missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("domain: key '") + key + "' has the wrong type");
    }
}

std::optional<double> collar_of(const json& j) {
    if (!j.contains("collar")) return std::nullopt;
    return get<double>(j, "collar");
}

RadialForm form_of(const json& j) {
    if (!j.contains("form")) return RadialForm::Squared;
    auto f = get<std::string>(j, "form");
    if (f == "squared") return RadialForm::Squared;
    if (f == "norm") return RadialForm::Norm;
    throw ConfigError("domain: form must be \"squared\" or \"norm\"");
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("domain: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("domain: the document must be a JSON object");
    auto kind = get<std::string>(j, "kind");
    if (kind == "disk") {
        check_keys(j, {"kind", "collar", "form"});
        return DomainSpec::unit_disk(collar_of(j), form_of(j));
    }
    if (kind == "ball") {
        check_keys(j, {"kind", "dimension", "collar", "form"});
        return DomainSpec::unit_ball(get<int>(j, "dimension"), collar_of(j), form_of(j));
    }
    if (kind == "ellipsoid") {
        check_keys(j, {"kind", "exponents", "semi_axes", "collar"});
        return DomainSpec::ellipsoid(get<std::vector<int>>(j, "exponents"), get<std::vector<double>>(j, "semi_axes"),
                                     collar_of(j));
    }
    if (kind == "polynomial") {
        check_keys(j, {"kind", "dimension", "terms", "box_half_width", "anchor", "collar"});
        int n = get<int>(j, "dimension");
        if (n < 1) throw ConfigError("domain: dimension must be positive");
        std::vector<PolyTerm> terms;
        if (!j.at("terms").is_array()) throw ConfigError("domain: terms must be an array");
        for (const auto& t : j.at("terms")) {
            if (!t.is_object()) throw ConfigError("domain: every term must be an object");
            check_keys(t, {"coeff", "powers"});
            terms.push_back({get<double>(t, "coeff"), get<std::vector<int>>(t, "powers")});
        }
        auto anchor = get<std::vector<double>>(j, "anchor");
        if (anchor.size() != static_cast<std::size_t>(2 * n))
            throw ConfigError("domain: anchor needs 2n real coordinates");
        CVec a(n);
        for (int k = 0; k < n; ++k) a(k) = Complex(anchor[2 * k], anchor[2 * k + 1]);
        return DomainSpec::convex_polynomial(n, std::move(terms), get<double>(j, "box_half_width"), a, collar_of(j));
    }
    throw ConfigError("domain: unknown kind '" + kind + "'");
}

DomainSpec load_domain(const std::string& path) { return parse_domain(read_file(path)); }

std::string domain_json(const DomainSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = spec.kind_name();
    switch (spec.kind()) {
        case DomainKind::UnitDisk:
        case DomainKind::UnitBall:
            if (spec.kind() == DomainKind::UnitBall) j["dimension"] = spec.dimension();
            j["form"] = spec.radial_form() == RadialForm::Squared ? "squared" : "norm";
            break;
        case DomainKind::ComplexEllipsoid:
            j["exponents"] = spec.exponents();
            j["semi_axes"] = spec.semi_axes();
            break;
        case DomainKind::ConvexPolynomial: {
            j["dimension"] = spec.dimension();
            auto terms = nlohmann::ordered_json::array();
            for (const auto& t : spec.terms()) terms.push_back({{"coeff", t.coeff}, {"powers", t.powers}});
            j["terms"] = terms;
            j["box_half_width"] = spec.box_half_width();
            std::vector<double> a;
            for (int k = 0; k < spec.dimension(); ++k) {
                a.push_back(spec.anchor()(k).real());
                a.push_back(spec.anchor()(k).imag());
            }
            j["anchor"] = a;
            break;
        }
    }
    j["collar"] = spec.collar_width();
    return j.dump();
}

Measure read_atomic_csv(const DomainSpec& spec, std::istream& is) {
    const int n = spec.dimension();
    std::vector<Atom> atoms;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        bool header = first && !cells.empty() && !cells[0].empty() &&
                      std::isalpha(static_cast<unsigned char>(cells[0][0])) != 0;
        first = false;
        if (header) continue;
        const std::string where = "measure CSV: line " + std::to_string(lineno);
        if (cells.size() != static_cast<std::size_t>(2 * n + 1))
            throw ConfigError(where + " needs " + std::to_string(2 * n) + " coordinates and a weight");
        Atom a;
        a.point.resize(n);
        try {
            for (int j = 0; j < n; ++j) a.point(j) = Complex(std::stod(cells[2 * j]), std::stod(cells[2 * j + 1]));
            a.weight = std::stod(cells[2 * n]);
        } catch (const std::exception&) {
            throw ConfigError(where + " has a non-numeric cell");
        }
        atoms.push_back(std::move(a));
    }
    return Measure::atomic(spec, std::move(atoms));
}

void write_atomic_csv(std::ostream& os, const Measure& mu, int n) {
    for (int j = 1; j <= n; ++j) os << "x" << j << ",y" << j << ",";
    os << "weight\n" << std::setprecision(17);
    for (const auto& a : mu.atoms()) {
        for (int j = 0; j < n; ++j) os << a.point(j).real() << "," << a.point(j).imag() << ",";
        os << a.weight << "\n";
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace clab
