#include "lureid/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lureid {

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns) {
    if (headers.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
    const std::size_t rows = columns[0]->size();
    for (const auto* col : columns)
        if (col->size() != rows) throw std::invalid_argument("write_csv: ragged columns");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    for (std::size_t c = 0; c < headers.size(); ++c)
        out << headers[c] << (c + 1 < headers.size() ? "," : "\n");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << format_full((*columns[c])[r]) << (c + 1 < columns.size() ? "," : "\n");
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path.string());
}

Json to_json(const RationalTF& tf) {
    return Json{{"num", tf.num()}, {"den", tf.den()}};
}

RationalTF tf_from_json(const Json& j) {
    return RationalTF(j.at("num").get<std::vector<double>>(),
                      j.at("den").get<std::vector<double>>());
}

namespace {

Json basis_to_json(const BasisFn& basis) {
    switch (basis.kind()) {
        case BasisFn::Kind::monomial:
            return Json{{"kind", "monomial"}, {"param", static_cast<int>(basis.param())}};
        case BasisFn::Kind::hinge_pos:
            return Json{{"kind", "hinge_pos"}, {"param", basis.param()}};
        case BasisFn::Kind::hinge_neg:
            return Json{{"kind", "hinge_neg"}, {"param", basis.param()}};
        case BasisFn::Kind::tabulated:
            return Json{{"kind", "tabulated"},
                        {"xs", basis.table()->xs()},
                        {"ys", basis.table()->ys()}};
    }
    throw std::logic_error("basis_to_json: unhandled kind");
}

BasisFn basis_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "monomial") return BasisFn::monomial(j.at("param").get<int>());
    if (kind == "hinge_pos") return BasisFn::hinge_pos(j.at("param").get<double>());
    if (kind == "hinge_neg") return BasisFn::hinge_neg(j.at("param").get<double>());
    if (kind == "tabulated")
        return BasisFn::tabulated(j.at("xs").get<std::vector<double>>(),
                                  j.at("ys").get<std::vector<double>>());
    throw std::invalid_argument("basis_from_json: unknown kind '" + kind + "'");
}

}  // namespace

Json to_json(const StaticNL& nl) {
    Json terms = Json::array();
    for (const auto& term : nl.terms()) {
        Json t = basis_to_json(term.basis);
        t["coeff"] = term.coeff;
        terms.push_back(std::move(t));
    }
    return Json{{"a1", nl.linear_coeff()},
                {"terms", std::move(terms)},
                {"sector", {nl.declared_sector().rho1, nl.declared_sector().rho2}},
                {"domain", {nl.domain_hint().first, nl.domain_hint().second}}};
}

StaticNL nl_from_json(const Json& j) {
    std::vector<StaticNL::Term> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({t.at("coeff").get<double>(), basis_from_json(t)});
    const auto sector = j.at("sector").get<std::vector<double>>();
    const auto domain = j.at("domain").get<std::vector<double>>();
    return StaticNL(j.at("a1").get<double>(), std::move(terms),
                    SectorBounds(sector.at(0), sector.at(1)), {domain.at(0), domain.at(1)});
}

Json to_json(const LureModel& model) {
    Json j{{"g", to_json(model.g)}, {"h", to_json(model.h)}};
    if (!model.name.empty()) j["name"] = model.name;
    return j;
}

LureModel lure_model_from_json(const Json& j) {
    return LureModel{tf_from_json(j.at("g")), nl_from_json(j.at("h")),
                     j.value("name", std::string{})};
}

Json to_json(const StaticFit& fit) {
    Json bases = Json::array();
    for (const auto& b : fit.bases) bases.push_back(basis_to_json(b));
    return Json{{"coefficients", fit.w_hat},
                {"bases", std::move(bases)},
                {"residual_norm", fit.residual_norm},
                {"cond_phi", fit.cond_phi},
                {"k", fit.k},
                {"fit_range", {fit.fit_range.first, fit.fit_range.second}}};
}

StaticFit static_fit_from_json(const Json& j) {
    StaticFit fit;
    fit.w_hat = j.at("coefficients").get<std::vector<double>>();
    for (const auto& b : j.at("bases")) fit.bases.push_back(basis_from_json(b));
    fit.residual_norm = j.at("residual_norm").get<double>();
    fit.cond_phi = j.at("cond_phi").get<double>();
    fit.k = j.at("k").get<double>();
    const auto range = j.at("fit_range").get<std::vector<double>>();
    fit.fit_range = {range.at(0), range.at(1)};
    if (fit.w_hat.size() != fit.bases.size() + 1)
        throw std::invalid_argument("static_fit_from_json: coefficient/basis size mismatch");
    return fit;
}

Json to_json(const FrfEstimate& frf) {
    std::vector<double> re(frf.response.size()), im(frf.response.size());
    for (std::size_t i = 0; i < frf.response.size(); ++i) {
        re[i] = frf.response[i].real();
        im[i] = frf.response[i].imag();
    }
    return Json{{"freq_hz", frf.freq_hz},
                {"re", re},
                {"im", im},
                {"variance", frf.variance},
                {"realizations", frf.realizations}};
}

Json to_json(const IdentifiedModel& model) {
    return Json{{"g_a", to_json(model.g_a_hat)},
                {"g_k", to_json(model.g_k_hat)},
                {"h", to_json(model.h_hat)},
                {"k", model.k},
                {"fit_residual", model.fit_residual}};
}

IdentifiedModel identified_model_from_json(const Json& j) {
    IdentifiedModel model;
    model.g_a_hat = tf_from_json(j.at("g_a"));
    model.g_k_hat = tf_from_json(j.at("g_k"));
    model.h_hat = nl_from_json(j.at("h"));
    model.k = j.at("k").get<double>();
    model.fit_residual = j.value("fit_residual", 0.0);
    model.g_a_poles = model.g_a_hat.poles();
    if (!model.g_k_hat.is_zero()) model.g_k_poles = model.g_k_hat.poles();
    return model;
}

void write_record(const std::filesystem::path& csv_path, const SampledRecord& record) {
    std::vector<double> t(record.size());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = record.time_at(n);

    std::vector<std::string> headers{"t", "v_r", "v_m", "i_m"};
    std::vector<const std::vector<double>*> cols{&t, &record.v_r, &record.v_m, &record.i_m};
    if (!record.v.empty()) {
        headers.insert(headers.end(), {"v", "i"});
        cols.insert(cols.end(), {&record.v, &record.i});
    }
    write_csv(csv_path, headers, cols);

    Json meta{{"T_s", record.T_s},
              {"seed", record.seed},
              {"samples", record.size()},
              {"config", record.config_summary},
              {"warnings", record.warnings}};
    std::filesystem::path meta_path = csv_path;
    meta_path.replace_extension(".meta.json");
    write_json(meta_path, meta);
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write_json: write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open " + path.string());
    Json j;
    in >> j;
    return j;
}

}  // namespace lureid
