#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dqs/elliptic.hpp"
#include "dqs/io.hpp"

using namespace dqs;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;

struct RunConfig {
    long precision = 256;
    int order = 12;
    int samples = 6;
    double tol = 0.0;  // 0: per-suite default
    long seed = 1;
    std::string out;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const json& report, const std::string& out) {
    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    f << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
}

io::SystemInput loadSystem(const std::string& path) {
    return io::systemFromJson(io::parseDocument(readFile(path)));
}

bool isIntegerDiff(const ExactComplex& d) { return sgn(d.im) == 0 && d.re.get_den() == 1; }

bool isPowerOfQ(const ExactComplex& ratio, const ExactComplex& q) {
    ExactComplex p(1);
    for (int e = 0; e <= 64; ++e) {
        if (ratio == p || ratio * p == ExactComplex(1)) return true;
        p *= q;
    }
    return false;
}

json rootsReport(const ExactPoly& det, mpfr_prec_t prec, bool& exact,
                 std::vector<ExactComplex>& exactRootsOut) {
    json arr = json::array();
    try {
        exactRootsOut = exactRoots(det);
        exact = true;
        for (const auto& r : exactRootsOut) arr.push_back(io::toJson(r));
    } catch (const std::exception&) {
        exact = false;
        NumPoly np = promote(det, prec);
        for (const auto& r : numericRoots(np.shifted(-std::min(det.low(), 0)), prec))
            arr.push_back(io::toJson(r));
    }
    return arr;
}

int cmdAnalyze(const std::string& file, const RunConfig& cfg) {
    io::SystemInput s = loadSystem(file);
    json rep;
    json warnings = json::array();
    size_t n = s.M.rows();
    rep["n"] = n;
    if (s.M.rows() != s.M.cols()) throw io::ParseError("system matrix must be square");
    ExactPoly det = s.M.det();
    if (det.isZero()) throw io::ParseError("system matrix is singular");
    bool exact = false;
    std::vector<ExactComplex> roots;
    rep["detRoots"] = rootsReport(det, mpfr_prec_t(cfg.precision), exact, roots);
    rep["detRootsExact"] = exact;

    if (s.kind == SystemKind::difference) {
        rep["kind"] = "difference";
        int r = matHigh(s.M);
        rep["r"] = r;
        if (matLow(s.M) < 0) throw io::ParseError("difference system must be polynomial");
        ExactMatrix top = coeffMat(s.M, r);
        bool diag = true;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (i != j && !top(i, j).isZero()) diag = false;
        rep["leadingDiagonal"] = diag;
        bool ratiosOk = true;
        if (diag) {
            json rho = json::array(), d = json::array();
            for (size_t k = 0; k < n; ++k) {
                if (top(k, k).isZero()) throw io::ParseError("leading coefficient is singular");
                rho.push_back(io::toJson(top(k, k)));
                d.push_back(io::toJson(coeffMat(s.M, r - 1)(k, k) / top(k, k)));
            }
            rep["rho"] = rho;
            rep["d"] = d;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (i != j && sgn((top(i, i) / top(j, j)).im) == 0) ratiosOk = false;
            if (!ratiosOk) warnings.push_back("some rho_i/rho_j is real");
        } else {
            warnings.push_back("leading coefficient not diagonal; run normalize first");
        }
        bool nonCongruent = exact;
        if (exact)
            for (size_t i = 0; i < roots.size() && nonCongruent; ++i)
                for (size_t j = i + 1; j < roots.size() && nonCongruent; ++j)
                    if (isIntegerDiff(roots[i] - roots[j])) nonCongruent = false;
        rep["preconditions"] = {{"nonCongruentRoots", nonCongruent},
                               {"rhoRatiosNonReal", diag && ratiosOk}};
    } else {
        rep["kind"] = "qdifference";
        rep["q"] = io::toJson(s.q);
        rep["mu"] = matHigh(s.M);
        rep["low"] = matLow(s.M);
        ExactMatrix top = coeffMat(s.M, matHigh(s.M));
        json lam = json::array();
        bool resonant = false, diagable = true;
        std::vector<ExactComplex> vals;
        try {
            ExactEigen eig = exactEigenDistinct(top);
            vals = eig.values;
        } catch (const std::exception&) {
            diagable = false;
            warnings.push_back("leading coefficient not diagonalizable over Q(i)");
        }
        for (const auto& v : vals) lam.push_back(io::toJson(v));
        rep["topEigenvalues"] = lam;
        for (size_t i = 0; i < vals.size() && !resonant; ++i)
            for (size_t j = 0; j < vals.size() && !resonant; ++j)
                if (i != j && !vals[j].isZero() && isPowerOfQ(vals[i] / vals[j], s.q))
                    resonant = true;
        if (resonant) warnings.push_back("resonant leading eigenvalues");
        bool nonCongruent = exact;
        if (exact)
            for (size_t i = 0; i < roots.size() && nonCongruent; ++i)
                for (size_t j = i + 1; j < roots.size() && nonCongruent; ++j) {
                    if (roots[i] == roots[j]) nonCongruent = false;
                    if (!roots[j].isZero() && isPowerOfQ(roots[i] / roots[j], s.q))
                        nonCongruent = false;
                }
        rep["preconditions"] = {{"nonCongruentRoots", nonCongruent},
                               {"nonResonant", diagable && !resonant}};
    }
    rep["warnings"] = warnings;
    emit(rep, cfg.out);
    return kExitOk;
}

void writeMonodromyCsv(const std::string& path,
                       const std::vector<std::pair<BigComplex, NumMatrix>>& samples) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << "re_t,im_t";
    if (!samples.empty()) {
        size_t n = samples.front().second.rows();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                f << ",abs_p" << i << j << ",arg_p" << i << j;
    }
    f << "\n";
    for (const auto& [t, p] : samples) {
        f << t.re.str(20) << "," << t.im.str(20);
        for (size_t i = 0; i < p.rows(); ++i)
            for (size_t j = 0; j < p.cols(); ++j) {
                BigComplex v = p(i, j);
                f << "," << abs(v).str(20) << "," << atan2(v.im, v.re).str(20);
            }
        f << "\n";
    }
}

int cmdVerify(const std::string& file, const std::string& suite, const RunConfig& cfg) {
    io::SystemInput s = loadSystem(file);
    mpfr_prec_t prec = mpfr_prec_t(cfg.precision);
    json rep{{"suite", suite}};
    auto tolOr = [&](const char* dflt) {
        return cfg.tol > 0 ? BigFloat(std::to_string(cfg.tol), prec) : BigFloat(dflt, prec);
    };

    if (suite == "fuchs") {
        if (s.kind != SystemKind::difference)
            throw std::domain_error("fuchs suite applies to difference systems");
        DifferenceSystem ds = makeDifferenceSystem(s.M);
        ExactComplex resid = verifyFuchs(ds);
        rep["residual"] = resid.str();
        rep["pass"] = resid.isZero();
    } else if (suite == "legendre") {
        if (s.kind != SystemKind::qdifference)
            throw std::domain_error("legendre suite needs a q-system (its base q)");
        BigComplex qn = s.q.toBig(prec);
        PeriodLattice lat = latticeConstants(qn, prec);
        BigComplex resid =
            lat.eta * lat.omegaPrime - lat.etaPrime - BigComplex::pi2i(lat.lnq.prec());
        BigFloat tol = tolOr("1e-30");
        rep["residual"] = abs(resid).str(30);
        rep["pass"] = abs(resid) < tol;
    } else if (suite == "periodicity" || suite == "circuit") {
        BigFloat tol = tolOr("1e-8");
        if (s.kind == SystemKind::qdifference) {
            QDifferenceSystem qs = makeQSystem(s.M, s.q);
            QMonodromyReport mon = monodromyQ(qs, cfg.samples, prec);
            BigFloat resid =
                suite == "circuit" ? mon.circuitResidual : mon.periodicityResidual;
            rep["residual"] = resid.str(20);
            rep["pass"] = resid < tol;
            if (!cfg.out.empty()) writeMonodromyCsv(cfg.out, mon.samples);
        } else {
            if (suite == "circuit")
                throw std::domain_error("circuit suite applies to q-systems");
            DifferenceSystem ds = makeDifferenceSystem(s.M);
            DiffMonodromyReport mon = monodromyDifference(ds, cfg.samples, prec);
            rep["residual"] = mon.periodicityResidual.str(20);
            rep["fitResidual"] = mon.fitResidual.str(20);
            rep["pass"] = mon.periodicityResidual < tol;
            if (!cfg.out.empty()) writeMonodromyCsv(cfg.out, mon.samples);
        }
        if (!cfg.out.empty()) {
            std::cout << rep.dump(2) << "\n";
            return rep["pass"].get<bool>() ? kExitOk : kExitNumeric;
        }
    } else if (suite == "sigma-form") {
        if (s.kind != SystemKind::qdifference)
            throw std::domain_error("sigma-form suite applies to q-systems");
        QDifferenceSystem qs = makeQSystem(s.M, s.q);
        QMonodromyReport mon = monodromyQ(qs, 2, prec);
        auto entry = monodromyEntry(qs, 0, 0, std::max(cfg.order, 32), prec);
        BigComplex t0(0.17, 0.09, mon.rho[0].prec());
        SigmaFormFit fit =
            fitSigmaForm(entry, qs.mu, mon.lattice, mon.sigma[0] + mon.rho[0], t0, prec);
        BigFloat tol = tolOr("1e-6");
        json zeros = json::array();
        for (const auto& a : fit.zeros) zeros.push_back(io::toJson(a));
        rep["zeros"] = zeros;
        rep["c"] = io::toJson(fit.c);
        rep["b"] = io::toJson(fit.b);
        rep["u"] = fit.u;
        rep["v"] = fit.v;
        rep["windingCount"] = fit.windingCount;
        rep["fitResidual"] = fit.fitResidual.str(20);
        rep["latticeResidual"] = fit.latticeResidual.str(20);
        rep["pass"] = fit.windingCount == qs.mu && fit.fitResidual < tol &&
                      fit.latticeResidual < tol;
    } else {
        throw std::domain_error("unknown suite '" + suite + "'");
    }
    emit(rep, cfg.out);
    return rep["pass"].get<bool>() ? kExitOk : kExitNumeric;
}

int cmdNormalize(const std::string& file, const std::vector<int>& targets,
                 const RunConfig& cfg) {
    io::SystemInput s = loadSystem(file);
    NormalizeResult res;
    if (s.kind == SystemKind::qdifference)
        res = normalizeSystem(makeQSystem(s.M, s.q), targets);
    else
        res = normalizeSystem(makeDifferenceSystem(s.M), targets);
    json rep;
    rep["system"] = io::toJson(io::SystemInput{s.kind, s.q, res.Q});
    rep["gaugeLog"] = io::toJson(res.log);
    rep["trajectory"] = res.normTrajectory;
    std::cout << "||D||_1 trajectory:";
    for (int v : res.normTrajectory) std::cout << " " << v;
    std::cout << "\n";
    emit(rep, cfg.out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"difference / q-difference system toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string file, suite;
    std::vector<int> targets;

    auto addCommon = [&](CLI::App* c) {
        c->add_option("file", file, "system file (JSON)")->required();
        c->add_option("--precision", cfg.precision, "working precision in bits");
        c->add_option("--order", cfg.order, "series truncation order");
        c->add_option("--samples", cfg.samples, "sample count for monodromy grids");
        c->add_option("--tol", cfg.tol, "tolerance (0: per-suite default)");
        c->add_option("--seed", cfg.seed, "seed for randomized checks");
        c->add_option("--out", cfg.out, "output path for the JSON report");
    };

    CLI::App* an = app.add_subcommand("analyze", "report exponents and preconditions");
    addCommon(an);
    CLI::App* ve = app.add_subcommand("verify", "run a verification suite");
    addCommon(ve);
    ve->add_option("--suite", suite, "fuchs|legendre|periodicity|circuit|sigma-form")
        ->required();
    CLI::App* no = app.add_subcommand("normalize", "run the normalization pipeline");
    addCommon(no);
    no->add_option("--targets", targets, "integer shifts, one per row")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed()) return cmdAnalyze(file, cfg);
        if (ve->parsed()) return cmdVerify(file, suite, cfg);
        return cmdNormalize(file, targets, cfg);
    } catch (const io::ParseError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const ProgressImpossible& ex) {
        std::cerr << "precondition violated: " << ex.what() << "\n";
        return kExitPrecondition;
    } catch (const std::domain_error& ex) {
        std::cerr << "precondition violated: " << ex.what() << "\n";
        return kExitPrecondition;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "precondition violated: " << ex.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& ex) {
        std::cerr << "failure: " << ex.what() << "\n";
        return kExitNumeric;
    }
}
