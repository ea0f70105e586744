#include "dqs/io.hpp"

namespace dqs::io {

namespace {

mpq_class parseRational(const json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + ": expected a rational string");
    try {
        mpq_class q(j.get<std::string>());
        q.canonicalize();
        return q;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": bad rational '" + j.get<std::string>() + "'");
    }
}

template <class T, class F>
Matrix<T> matrixFromJson(const json& j, F entry, const char* what) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected rows");
    size_t rows = j.size(), cols = j[0].size();
    Matrix<T> m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(std::string(what) + ": ragged rows");
        for (size_t k = 0; k < cols; ++k) m(i, k) = entry(j[i][k]);
    }
    return m;
}

template <class T, class F>
json matrixToJson(const Matrix<T>& m, F entry) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(entry(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ExactMatrix constMatFromJson(const json& j, const char* what) {
    return matrixFromJson<ExactComplex>(j, [](const json& e) { return exactFromJson(e); }, what);
}

}  // namespace

json toJson(const ExactComplex& c) {
    return json{{"re", c.re.get_str()}, {"im", c.im.get_str()}};
}

ExactComplex exactFromJson(const json& j) {
    if (!j.is_object()) throw ParseError("complex rational: expected an object");
    return {parseRational(j.value("re", json("0")), "re"),
            parseRational(j.value("im", json("0")), "im")};
}

json toJson(const ExactPoly& p) {
    json o = json::object();
    for (const auto& [e, c] : p.coeffs()) o[std::to_string(e)] = toJson(c);
    return o;
}

ExactPoly polyFromJson(const json& j) {
    if (!j.is_object()) throw ParseError("polynomial: expected an exponent map");
    ExactPoly p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        int e;
        try {
            e = std::stoi(it.key());
        } catch (const std::exception&) {
            throw ParseError("polynomial: bad exponent '" + it.key() + "'");
        }
        p.setCoeff(e, exactFromJson(it.value()));
    }
    return p;
}

json toJson(const RatFunc& f) {
    if (f.isPolynomial()) return json{{"num", toJson(f.num)}};
    return json{{"num", toJson(f.num)}, {"den", toJson(f.den)}};
}

RatFunc ratFromJson(const json& j) {
    if (!j.is_object() || !j.contains("num"))
        throw ParseError("rational function: expected {num[, den]}");
    ExactPoly num = polyFromJson(j["num"]);
    if (!j.contains("den")) return RatFunc(std::move(num));
    return {std::move(num), polyFromJson(j["den"])};
}

json toJson(const ExactPolyMatrix& m) {
    return matrixToJson(m, [](const ExactPoly& p) { return toJson(p); });
}

ExactPolyMatrix polyMatFromJson(const json& j) {
    return matrixFromJson<ExactPoly>(j, [](const json& e) { return polyFromJson(e); }, "matrix");
}

json toJson(const Matrix<RatFunc>& m) {
    return matrixToJson(m, [](const RatFunc& f) { return toJson(f); });
}

Matrix<RatFunc> ratMatFromJson(const json& j) {
    return matrixFromJson<RatFunc>(j, [](const json& e) { return ratFromJson(e); }, "matrix");
}

json toJson(const BigComplex& z) {
    return json{{"re", z.re.str()}, {"im", z.im.str()}, {"precision", long(z.re.prec())}};
}

SystemInput systemFromJson(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("system: missing kind");
    std::string kind = j["kind"].get<std::string>();
    SystemInput s;
    if (kind == "difference") {
        s.kind = SystemKind::difference;
        if (!j.contains("coefficients") || !j["coefficients"].is_array() ||
            j["coefficients"].empty())
            throw ParseError("difference system: expected coefficients A_0..A_r");
        const json& cs = j["coefficients"];
        ExactMatrix a0 = constMatFromJson(cs[0], "A_0");
        ExactPolyMatrix m(a0.rows(), a0.cols());
        for (size_t e = 0; e < cs.size(); ++e) {
            ExactMatrix ae = constMatFromJson(cs[e], "A_e");
            if (ae.rows() != a0.rows() || ae.cols() != a0.cols())
                throw ParseError("difference system: coefficient shapes differ");
            for (size_t i = 0; i < ae.rows(); ++i)
                for (size_t k = 0; k < ae.cols(); ++k)
                    if (!ae(i, k).isZero()) m(i, k).setCoeff(int(e), ae(i, k));
        }
        s.M = std::move(m);
        return s;
    }
    if (kind == "qdifference") {
        s.kind = SystemKind::qdifference;
        if (!j.contains("q")) throw ParseError("q-system: missing q");
        s.q = exactFromJson(j["q"]);
        if (!j.contains("matrix")) throw ParseError("q-system: missing matrix");
        s.M = polyMatFromJson(j["matrix"]);
        return s;
    }
    throw ParseError("system: unknown kind '" + kind + "'");
}

json toJson(const SystemInput& s) {
    if (s.kind == SystemKind::qdifference)
        return json{{"kind", "qdifference"}, {"q", toJson(s.q)}, {"matrix", toJson(s.M)}};
    int r = std::max(matHigh(s.M), 0);
    if (matLow(s.M) < 0) throw std::invalid_argument("difference system files are polynomial");
    json cs = json::array();
    for (int e = 0; e <= r; ++e)
        cs.push_back(matrixToJson(coeffMat(s.M, e), [](const ExactComplex& c) { return toJson(c); }));
    return json{{"kind", "difference"}, {"n", s.M.rows()}, {"r", r}, {"coefficients", cs}};
}

json toJson(const GaugeLog& log) {
    json steps = json::array();
    for (const auto& st : log.steps)
        steps.push_back(json{{"tag", st.tag}, {"matrix", toJson(st.M)}});
    return json{{"steps", steps}};
}

GaugeLog gaugeLogFromJson(const json& j) {
    if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
        throw ParseError("gauge log: expected {steps: [...]}");
    GaugeLog log;
    for (const json& st : j["steps"]) {
        if (!st.contains("tag") || !st.contains("matrix"))
            throw ParseError("gauge log: step needs tag and matrix");
        log.push(st["tag"].get<std::string>(), ratMatFromJson(st["matrix"]));
    }
    return log;
}

json parseDocument(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ParseError(std::string("json: ") + ex.what());
    }
}

}  // namespace dqs::io
