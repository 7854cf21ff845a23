// Command-line driver. Subcommands:
//
//   construct  build a line class (bd, cpgmp, or derived) and emit a document
//   verify     run both counting checkers on a document and cross-check them
//   spectra    print both character spectra and the family classification
//   search     enumerate derivation sequences and report distinct spectra
//   symmetry   build the stabilizing group and test invariance of a document
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 construction violation, 4 budget exhaustion.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cl3q/document.hpp"
#include "cl3q/errors.hpp"
#include "cl3q/field.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/klein.hpp"
#include "cl3q/line_classes.hpp"
#include "cl3q/search.hpp"
#include "cl3q/spectra.hpp"
#include "cl3q/symmetry.hpp"

namespace {

using namespace cl3q;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitBudget = 4;

struct PrimePower {
    int p = 0, e = 0;
};

// q must be an odd prime power
std::optional<PrimePower> factor_prime_power(long long q) {
    if (q < 3 || q % 2 == 0) return std::nullopt;
    long long p = 3;
    while (p * p <= q && q % p != 0) p += 2;
    if (p * p > q) p = q;
    int e = 0;
    long long rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1) return std::nullopt;
    return PrimePower{static_cast<int>(p), e};
}

Geometry build_geometry(long long q, int max_q) {
    auto pp = factor_prime_power(q);
    if (!pp) throw DocumentInvalid("q must be an odd prime power, got " + std::to_string(q));
    return Geometry::build(Field::build(pp->p, pp->e), -1, max_q);
}

std::vector<DerivationPair> parse_pairs(const std::string& text) {
    std::vector<DerivationPair> pairs;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw DocumentInvalid("pair '" + item + "' is not of the form lambda1:lambda2");
        try {
            pairs.push_back(DerivationPair{std::stoi(item.substr(0, colon)),
                                           std::stoi(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw DocumentInvalid("pair '" + item + "' is not a pair of integers");
        }
    }
    if (pairs.empty()) throw DocumentInvalid("empty pair list");
    return pairs;
}

Json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DocumentInvalid("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DocumentInvalid(std::string("JSON parse error: ") + e.what());
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DocumentInvalid("cannot write " + path);
    out << content;
}

int cmd_construct(long long q, const std::string& family, const std::string& pairs_text,
                  const std::string& out_path, int max_q, int threads) {
    Geometry g = build_geometry(q, max_q);
    OrbitDecomposition d = decompose(g);

    LineClass cls;
    if (family == "bd") {
        if (!pairs_text.empty()) throw DocumentInvalid("--pairs applies only to --family derived");
        cls = bruen_drudge(g, d);
    } else if (family == "cpgmp") {
        if (!pairs_text.empty()) throw DocumentInvalid("--pairs applies only to --family derived");
        cls = cp_gmp(g, d);
    } else if (family == "derived") {
        std::vector<DerivationPair> pairs =
            pairs_text.empty() ? std::vector<DerivationPair>{DerivationPair{1, g.omega()}}
                               : parse_pairs(pairs_text);
        // argument-level validation first: bad pair values are usage errors,
        // failures inside the derivation itself are construction errors
        try {
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                validate_pair(g, pairs[i], i);
                for (std::size_t j = i + 1; j < pairs.size(); ++j)
                    if (pairs[i].lambda1 == pairs[j].lambda1 ||
                        pairs[i].lambda2 == pairs[j].lambda2)
                        throw PreconditionViolated("derivation values repeat across pairs", {},
                                                   {}, j);
            }
        } catch (const PreconditionViolated& e) {
            throw DocumentInvalid(e.what());
        }
        cls = derive_sequence(g, d, bruen_drudge(g, d), pairs);
    } else {
        throw DocumentInvalid("unknown family '" + family + "'");
    }

    // every emitted document must re-verify
    VerifyReport check = verify_cl(g, cls, threads);
    if (!check.pass) {
        std::cerr << "constructed class failed verification\n";
        return kExitConstruction;
    }
    write_output(out_path, document_to_string(to_document(g, cls)));
    return kExitPass;
}

int cmd_verify(const std::string& in_path, int max_q, int threads) {
    Json doc = load_document(in_path);
    Geometry g = geometry_for_document(doc, max_q);
    LineClass cls = from_document(g, doc);

    auto started = std::chrono::steady_clock::now();
    Json out;
    out["q"] = g.q();
    out["declared_parameter"] = cls.parameter;
    out["lines"] = cls.lines.size();

    bool pass = false;
    try {
        VerifyReport stars = verify_cl(g, cls, threads);
        TightSetReport klein =
            tight_set_check(g, cls.lines, Rational{cls.parameter, 1}, threads);
        bool agree = stars.counts == klein.counts && stars.pass == klein.pass;
        pass = stars.pass && klein.pass && agree;
        out["star_count_check"] = report_to_json(stars);
        out["klein_form_check"] = report_to_json(klein);
        out["checkers_agree"] = agree;
    } catch (const SizeMismatch& e) {
        out["structural_error"] = e.what();
    } catch (const EmptySet& e) {
        out["structural_error"] = e.what();
    }
    out["pass"] = pass;
    out["runtime_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    std::cout << out.dump(2) << "\n";
    return pass ? kExitPass : kExitVerifyFail;
}

int cmd_spectra(const std::string& in_path, int max_q) {
    Json doc = load_document(in_path);
    Geometry g = geometry_for_document(doc, max_q);
    LineClass cls = from_document(g, doc);

    CharacterSpectrum planes = plane_spectrum(g, cls.lines);
    CharacterSpectrum stars = star_spectrum(g, cls.lines);
    Json out;
    out["q"] = g.q();
    out["planes"] = spectrum_string(planes);
    out["stars"] = spectrum_string(stars);
    out["plane_total"] = spectrum_total(planes);
    out["star_total"] = spectrum_total(stars);
    out["classification"] = family_label_name(classify(g.q(), planes, stars));
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int cmd_search(long long q, const std::string& family, int depth, long long budget,
               const std::string& out_path, int max_q, int threads) {
    Geometry g = build_geometry(q, max_q);
    OrbitDecomposition d = decompose(g);
    LineClass start;
    if (family == "bd") start = bruen_drudge(g, d);
    else if (family == "cpgmp") start = cp_gmp(g, d);
    else throw DocumentInvalid("search starts from family bd or cpgmp, got '" + family + "'");

    SearchResult r;
    try {
        r = derivation_search(g, d, start, depth, budget, threads);
    } catch (const PreconditionViolated& e) {
        throw DocumentInvalid(e.what()); // bad depth is a usage error
    }

    Json out;
    out["q"] = r.q;
    out["start_family"] = r.start_family;
    out["depth"] = r.depth;
    out["explored"] = r.explored;
    out["partial"] = r.partial;
    Json fps = Json::array();
    for (const SearchFingerprint& fp : r.fingerprints) {
        Json pairs = Json::array();
        for (const DerivationPair& pr : fp.pairs)
            pairs.push_back(Json::array({pr.lambda1, pr.lambda2}));
        fps.push_back({{"planes", fp.plane_string},
                       {"stars", fp.star_string},
                       {"pairs", pairs},
                       {"combinations", fp.combinations},
                       {"verified", fp.verified}});
    }
    out["fingerprints"] = fps;
    write_output(out_path, out.dump(2) + "\n");
    return r.partial ? kExitBudget : kExitPass;
}

int cmd_symmetry(const std::string& in_path, int max_q) {
    Json doc = load_document(in_path);
    Geometry g = geometry_for_document(doc, max_q);
    LineClass cls = from_document(g, doc);
    const Field& f = g.field();

    std::vector<ProjMatrix> gens = psi_elements(f, g.omega());
    auto phi = phi_elements(f, g.omega());
    gens.insert(gens.end(), phi.begin(), phi.end());
    GroupClosure gamma = close(f, gens);

    std::vector<PointId> pi_points;
    for (PointId pt = 0; pt < g.num_points(); ++pt)
        if (g.point_coords(pt)[3] == 0) pi_points.push_back(pt);
    auto pi_orbits = point_orbits(g, gamma_generators(f, g.omega()), pi_points);
    std::vector<std::size_t> orbit_sizes;
    for (const auto& o : pi_orbits) orbit_sizes.push_back(o.size());
    std::sort(orbit_sizes.begin(), orbit_sizes.end());

    bool invariant = is_invariant(g, gamma_generators(f, g.omega()), cls.lines);

    Json out;
    out["q"] = g.q();
    out["group_order"] = gamma.order();
    out["invariant"] = invariant;
    out["pi_orbit_sizes"] = orbit_sizes;
    std::cout << out.dump(2) << "\n";
    return invariant ? kExitPass : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cameron-Liebler line classes of PG(3,q) with parameter (q^2+1)/2"};
    app.require_subcommand(1);

    long long q = 0;
    std::string family = "bd";
    std::string pairs_text;
    std::string in_path;
    std::string out_path = "-";
    int max_q = 13;
    int threads = 0;
    int depth = 0;
    long long budget = -1;

    CLI::App* construct = app.add_subcommand("construct", "build a line class document");
    construct->add_option("--q", q, "field order (odd prime power)")->required();
    construct->add_option("--family", family, "bd, cpgmp, or derived");
    construct->add_option("--pairs", pairs_text, "derivation pairs lambda1:lambda2[,...]");
    construct->add_option("--out", out_path, "output path, - for stdout");
    construct->add_option("--max-q", max_q, "capacity bound");
    construct->add_option("--threads", threads, "verification threads, 0 = hardware");

    CLI::App* verify = app.add_subcommand("verify", "run both counting checkers");
    verify->add_option("--in", in_path, "line class document")->required();
    verify->add_option("--max-q", max_q, "capacity bound");
    verify->add_option("--threads", threads, "verification threads, 0 = hardware");

    CLI::App* spectra = app.add_subcommand("spectra", "print character spectra");
    spectra->add_option("--in", in_path, "line class document")->required();
    spectra->add_option("--max-q", max_q, "capacity bound");

    CLI::App* search = app.add_subcommand("search", "enumerate derivation outcomes");
    search->add_option("--q", q, "field order (odd prime power)")->required();
    search->add_option("--family", family, "start class: bd or cpgmp");
    search->add_option("--depth", depth, "max values per square class")->required();
    search->add_option("--budget", budget, "max combinations, -1 unlimited");
    search->add_option("--out", out_path, "output path, - for stdout");
    search->add_option("--max-q", max_q, "capacity bound");
    search->add_option("--threads", threads, "verification threads, 0 = hardware");

    CLI::App* symmetry = app.add_subcommand("symmetry", "test group invariance");
    symmetry->add_option("--in", in_path, "line class document")->required();
    symmetry->add_option("--max-q", max_q, "capacity bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (construct->parsed())
            return cmd_construct(q, family, pairs_text, out_path, max_q, threads);
        if (verify->parsed()) return cmd_verify(in_path, max_q, threads);
        if (spectra->parsed()) return cmd_spectra(in_path, max_q);
        if (search->parsed())
            return cmd_search(q, family, depth, budget, out_path, max_q, threads);
        if (symmetry->parsed()) return cmd_symmetry(in_path, max_q);
    } catch (const DocumentInvalid& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const NotOddPrime& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidDegree& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const ClosureBudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitBudget;
    } catch (const PreconditionViolated& e) {
        std::cerr << e.what() << "\n";
        return kExitConstruction;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitConstruction;
    }
    return kExitUsage;
}
