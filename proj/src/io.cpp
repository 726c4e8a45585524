#include "supermix/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace supermix::io {

namespace {

void write_csv_value(std::ostream& out, double v) {
    out << std::setprecision(17) << v;
}

}  // namespace

json measure_to_json(const DiscreteMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) {
        json t = json::array();
        for (int j = 0; j < a.location.size(); ++j) t.push_back(a.location[j]);
        atoms.push_back({{"w", a.weight}, {"t", t}});
    }
    return {{"dim", mu.dim()}, {"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    std::vector<Atom> atoms;
    for (const auto& entry : j.at("atoms")) {
        Atom a;
        a.weight = entry.at("w").get<double>();
        const auto& t = entry.at("t");
        a.location.resize(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) a.location[k] = t[k].get<double>();
        atoms.push_back(std::move(a));
    }
    return DiscreteMeasure(dim, std::move(atoms));
}

void measure_to_csv(const DiscreteMeasure& mu, std::ostream& out) {
    out << "weight";
    for (int j = 1; j <= mu.dim(); ++j) out << ",x" << j;
    out << "\n";
    for (const auto& a : mu.atoms()) {
        write_csv_value(out, a.weight);
        for (int j = 0; j < mu.dim(); ++j) {
            out << ",";
            write_csv_value(out, a.location[j]);
        }
        out << "\n";
    }
}

void sample_to_csv(const Sample& sample, std::ostream& out) {
    for (int j = 1; j <= sample.dim; ++j) out << (j > 1 ? ",x" : "x") << j;
    out << "\n";
    for (const auto& x : sample.points) {
        for (int j = 0; j < sample.dim; ++j) {
            if (j > 0) out << ",";
            write_csv_value(out, x[j]);
        }
        out << "\n";
    }
}

Sample sample_from_csv(std::istream& in) {
    Sample sample;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("sample CSV: missing header");
    sample.dim = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        VectorXd x(sample.dim);
        std::string cell;
        for (int j = 0; j < sample.dim; ++j) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("sample CSV: short row");
            x[j] = std::stod(cell);
        }
        sample.points.push_back(std::move(x));
    }
    return sample;
}

json solve_result_to_json(const SolveResult& result) {
    return {{"estimate", measure_to_json(result.estimate)},
            {"iterations", result.iterations},
            {"converged", result.converged},
            {"dual_sup", result.dual_sup},
            {"objective_trace", result.objective_trace},
            {"support_trace", result.support_trace}};
}

void objective_trace_to_csv(const SolveResult& result, std::ostream& out) {
    out << "iteration,objective,support_size\n";
    for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
        out << i << ",";
        write_csv_value(out, result.objective_trace[i]);
        out << "," << (i < result.support_trace.size() ? result.support_trace[i] : -1) << "\n";
    }
}

void trajectory_to_csv(const std::vector<ParticleState>& trajectory, std::ostream& out) {
    int dim = 0;
    for (const auto& s : trajectory)
        if (!s.t.empty()) {
            dim = static_cast<int>(s.t.front().size());
            break;
        }
    out << "step,particle_id,mass";
    for (int j = 1; j <= dim; ++j) out << ",x" << j;
    out << "\n";
    for (const auto& s : trajectory) {
        for (int i = 0; i < s.count(); ++i) {
            out << s.step_index << "," << i << ",";
            write_csv_value(out, s.mass(i));
            for (int j = 0; j < dim; ++j) {
                out << ",";
                write_csv_value(out, s.t[i][j]);
            }
            out << "\n";
        }
    }
}

json audit_report_to_json(const AuditReport& report) {
    return {{"max_interp_residual", report.max_interp_residual},
            {"max_grad_residual", report.max_grad_residual},
            {"grid_max", report.grid_max},
            {"near_constant", report.near_constant},
            {"far_gap", report.far_gap},
            {"epsilon", report.epsilon},
            {"bandwidth_warning", report.bandwidth_warning}};
}

std::string config_hash(const json& config) {
    const std::string dump = config.dump();  // canonical: sorted keys, no spaces
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << h;
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace supermix::io
