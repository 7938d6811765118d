#include "mpemba/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpemba/errors.hpp"

namespace mpemba::io {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string state_to_json(const ExcitationState& state) {
    json j;
    j["M"] = state.M();
    j["atom_re"] = state.atom_amp().real();
    j["atom_im"] = state.atom_amp().imag();
    json re = json::array();
    json im = json::array();
    for (const cplx& q : state.field_amps()) {
        re.push_back(q.real());
        im.push_back(q.imag());
    }
    j["field_re"] = std::move(re);
    j["field_im"] = std::move(im);
    return j.dump(2) + "\n";
}

ExcitationState state_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("state file: ") + e.what());
    }
    static const char* keys[] = {"M", "atom_re", "atom_im", "field_re", "field_im"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys)) {
            throw ConfigError("state file: unknown key '" + key + "'");
        }
    }
    try {
        const int M = j.at("M").get<int>();
        const auto re = j.at("field_re").get<std::vector<double>>();
        const auto im = j.at("field_im").get<std::vector<double>>();
        if (re.size() != im.size() || re.size() != static_cast<std::size_t>(2 * M + 1)) {
            throw ConfigError("state file: field arrays must both have length 2M+1");
        }
        std::vector<cplx> field(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) field[i] = {re[i], im[i]};
        const cplx atom{j.at("atom_re").get<double>(), j.at("atom_im").get<double>()};
        // Files written by this module round-trip; allow a few ulps of slack.
        auto s = ExcitationState::unchecked(atom, std::move(field));
        if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
            throw ConfigError("state file: amplitudes are not normalized");
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("state file: ") + e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void save_state(const std::filesystem::path& path, const ExcitationState& state) {
    write_text(path, state_to_json(state));
}

ExcitationState load_state(const std::filesystem::path& path) {
    return state_from_json(read_text(path));
}

namespace {

std::string complex_series_csv(const char* axis, const UniformGrid& grid,
                               const std::vector<cplx>& values) {
    std::string out = std::string(axis) + ",re,im\n";
    for (int i = 0; i < grid.count; ++i) {
        const cplx v = values[static_cast<std::size_t>(i)];
        out += format_double(grid.at(i)) + "," + format_double(v.real()) + "," +
               format_double(v.imag()) + "\n";
    }
    return out;
}

} // namespace

std::string kernel_csv(const KernelData& kernel) {
    return complex_series_csv("tau", kernel.tau_grid, kernel.values);
}

std::string forcing_csv(const ForcingData& forcing) {
    return complex_series_csv("t", forcing.t_grid, forcing.values);
}

std::string volterra_csv(const VolterraSolution& solution) {
    std::string out = "t,re,im,D\n";
    for (std::size_t i = 0; i < solution.times.size(); ++i) {
        const cplx c = solution.amplitudes[i];
        out += format_double(solution.times[i]) + "," + format_double(c.real()) + "," +
               format_double(c.imag()) + "," + format_double(std::norm(c)) + "\n";
    }
    return out;
}

} // namespace mpemba::io
