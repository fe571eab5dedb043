#include "afsec/json_io.hpp"

#include "afsec/error.hpp"

#include <fstream>
#include <vector>

namespace afsec {

namespace {

Vec vec_field(const nlohmann::json& j, const char* key) {
    const auto values = j.at(key).get<std::vector<double>>();
    return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

ChannelInstance instance_from_json(const nlohmann::json& j) {
    Vec h_s, h_t, h_e, P_relay;
    double P_s = 0.0, sigma2 = 0.0;
    long long m = 0;
    try {
        if (!j.is_object())
            throw Error(ErrorCode::ParseError, "instance must be a JSON object");
        m = j.at("M").get<long long>();
        h_s = vec_field(j, "h_s");
        h_t = vec_field(j, "h_t");
        h_e = vec_field(j, "h_e");
        P_relay = vec_field(j, "P_relay");
        P_s = j.at("P_s").get<double>();
        sigma2 = j.at("sigma2").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (m != h_s.size())
        throw Error(ErrorCode::InvalidInstance, "M does not match the gain vector length");
    return ChannelInstance(std::move(h_s), std::move(h_t), std::move(h_e), P_s,
                           std::move(P_relay), sigma2);
}

nlohmann::json instance_to_json(const ChannelInstance& inst) {
    return {{"M", inst.M()},
            {"h_s", to_std(inst.h_s())},
            {"h_t", to_std(inst.h_t())},
            {"h_e", to_std(inst.h_e())},
            {"P_s", inst.P_s()},
            {"P_relay", to_std(inst.P_relay())},
            {"sigma2", inst.sigma2()}};
}

ChannelInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return instance_from_json(j);
}

nlohmann::json report_to_json(const SolveReport& report) {
    const auto& d = report.diagnostics;
    nlohmann::json diag = {{"iterations", d.iterations},
                           {"inner_iterations", d.inner_iterations},
                           {"residual", d.residual},
                           {"degenerate", d.degenerate}};
    if (d.eta_star)
        diag["eta_star"] = *d.eta_star;
    if (!d.note.empty())
        diag["note"] = d.note;
    return {{"beta_opt", to_std(report.beta_opt.beta)},
            {"snr_d", report.snr_d},
            {"snr_e", report.snr_e},
            {"rate_bits", report.rate_bits},
            {"method", std::string(to_string(report.method))},
            {"diagnostics", diag}};
}

} // namespace afsec
