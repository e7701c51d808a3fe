#include "protmeas/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace protmeas {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json coupling_to_json(const CouplingSpec& spec) {
    nlohmann::ordered_json j;
    if (spec.is_constant()) {
        j["shape"] = "constant";
        j["T"] = spec.duration();
    } else if (const auto* c = spec.series_coefficients()) {
        j["shape"] = "series";
        j["T"] = spec.duration();
        j["N"] = c->order();
    } else {
        const auto& b = std::get<BumpShape>(spec.shape());
        j["shape"] = "bump";
        j["T"] = spec.duration();
        j["alpha"] = b.alpha;
        j["beta"] = b.beta;
    }
    return j;
}

CouplingSpec coupling_from_json(const nlohmann::json& j) {
    const std::string shape = j.at("shape").get<std::string>();
    const MeasurementWindow window(j.at("T").get<double>());
    if (shape == "constant") return CouplingSpec::constant(window);
    if (shape == "series") return CouplingSpec::series(window, j.at("N").get<int>());
    if (shape == "bump")
        return CouplingSpec::bump(window, j.at("alpha").get<int>(), j.at("beta").get<int>());
    throw std::invalid_argument("coupling_from_json: unknown shape '" + shape + "'");
}

nlohmann::ordered_json model_to_json(const SystemModel& model) {
    nlohmann::ordered_json j;
    j["energies"] = model.energies();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < model.dimension(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < model.dimension(); ++c) {
            const auto v = model.observable()(r, c);
            row.push_back({v.real(), v.imag()});
        }
        rows.push_back(row);
    }
    j["observable"] = rows;
    j["initial"] = model.initial();
    return j;
}

SystemModel model_from_json(const nlohmann::json& j) {
    const auto energies = j.at("energies").get<std::vector<double>>();
    const auto& rows = j.at("observable");
    const auto d = static_cast<Eigen::Index>(energies.size());
    if (static_cast<Eigen::Index>(rows.size()) != d)
        throw std::invalid_argument("model: observable row count != energy count");
    Eigen::MatrixXcd O(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const auto& row = rows.at(r);
        if (static_cast<Eigen::Index>(row.size()) != d)
            throw std::invalid_argument("model: observable is not square");
        for (Eigen::Index c = 0; c < d; ++c) {
            const auto& e = row.at(c);
            if (e.is_array()) {
                if (e.size() != 2) throw std::invalid_argument("model: entry must be [re, im]");
                O(r, c) = {e.at(0).get<double>(), e.at(1).get<double>()};
            } else {
                O(r, c) = {e.get<double>(), 0.0};
            }
        }
    }
    return {energies, std::move(O), j.at("initial").get<int>()};
}

SystemModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

nlohmann::ordered_json fit_to_json(const DecayFit& fit) {
    nlohmann::ordered_json j;
    if (fit.model == DecayModel::power_law) {
        j["model"] = "power";
        j["exponent"] = fit.exponent;
    } else {
        j["model"] = "subexp";
        j["stretch"] = fit.stretch;
        j["rate"] = fit.rate;
        j["prefactor_exponent"] = fit.prefactor_exponent;
    }
    j["amplitude"] = fit.amplitude;
    j["residual"] = fit.residual;
    j["range"] = {fit.range.lo, fit.range.hi};
    j["extrapolated"] = fit.extrapolated;
    return j;
}

nlohmann::ordered_json evolution_to_json(const EvolutionResult& result) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < result.final_amplitudes.size(); ++i)
        c.push_back({result.final_amplitudes(i).real(), result.final_amplitudes(i).imag()});
    j["c"] = c;
    j["norm_defect"] = result.norm_defect;
    j["steps"] = result.integrator_steps;
    j["err"] = result.estimated_error;
    return j;
}

nlohmann::ordered_json amplitudes_to_json(const AmplitudeSet& set) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [m, a] : set.first_order)
        rows.push_back({{"m", m}, {"tier", "first_order"}, {"re", a.real()}, {"im", a.imag()}});
    for (const auto& [key, a] : set.leading_by_order)
        rows.push_back({{"m", key.first},
                        {"tier", "leading_order_" + std::to_string(key.second)},
                        {"re", a.real()},
                        {"im", a.imag()}});
    for (const auto& [m, a] : set.total_leading)
        rows.push_back({{"m", m}, {"tier", "total_leading"}, {"re", a.real()}, {"im", a.imag()}});
    j["amplitudes"] = rows;
    j["disturbance"] = set.disturbance;
    j["disturbance_tier"] =
        set.disturbance_tier == AmplitudeTier::first_order ? "first_order" : "total_leading";
    return j;
}

void write_curve_csv(std::ostream& os, const SpectralCurve& curve) {
    os << "omega_t,re,im,abs\n";
    for (const auto& p : curve.points)
        os << format_full(p.omega_t) << ',' << format_full(p.value.real()) << ','
           << format_full(p.value.imag()) << ',' << format_full(std::abs(p.value)) << '\n';
}

void write_envelope_csv(std::ostream& os, const Envelope& envelope) {
    os << "omega_t,envelope\n";
    for (const auto& p : envelope.points)
        os << format_full(p.omega_t) << ',' << format_full(p.magnitude) << '\n';
}

void write_samples_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples) {
    os << "t,g\n";
    for (const auto& [t, g] : samples)
        os << format_full(t) << ',' << format_full(g) << '\n';
}

}  // namespace protmeas
