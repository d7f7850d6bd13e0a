#include "ra/machine.hpp"

#include <sstream>
#include <stdexcept>

#include "ra/vrplib.hpp"

namespace ra {

ReferenceBase ReferenceBase::for_mode(MachineMode mode) {
    if (mode == MachineMode::Gpu) {
        return {9960.0, "gpu-default"};
    }
    return {2000.0, "cpu-default"};
}

ReferenceBase ReferenceBase::custom(double score) {
    if (score <= 0.0) {
        throw std::invalid_argument("reference base score must be positive");
    }
    return {score, "user-override"};
}

MachineMode parse_machine_mode(const std::string& text) {
    if (text == "cpu-single") {
        return MachineMode::CpuSingleThread;
    }
    if (text == "cpu-multi") {
        return MachineMode::CpuMultiThread;
    }
    if (text == "gpu") {
        return MachineMode::Gpu;
    }
    throw std::invalid_argument("unknown machine mode '" + text + "' (cpu-single|cpu-multi|gpu)");
}

std::string machine_mode_name(MachineMode mode) {
    switch (mode) {
        case MachineMode::CpuSingleThread:
            return "cpu-single";
        case MachineMode::CpuMultiThread:
            return "cpu-multi";
        case MachineMode::Gpu:
            return "gpu";
    }
    return "";
}

double machine_score(const MachineSpec& spec) {
    switch (spec.mode) {
        case MachineMode::CpuSingleThread:
            if (spec.cpu_mark_single <= 0.0) {
                throw std::invalid_argument("cpu-single mode needs a positive cpu_mark_single");
            }
            return spec.cpu_mark_single;
        case MachineMode::CpuMultiThread:
            if (!spec.cpu_mark_multi || *spec.cpu_mark_multi <= 0.0) {
                throw std::invalid_argument("cpu-multi mode needs a positive cpu_mark_multi");
            }
            return *spec.cpu_mark_multi;
        case MachineMode::Gpu: {
            if (!spec.gpu_g3d || !spec.gpu_g2d) {
                throw std::invalid_argument("gpu mode needs gpu_g3d and gpu_g2d marks");
            }
            if (spec.num_gpu < 1) {
                throw std::invalid_argument("gpu mode needs num_gpu >= 1");
            }
            if (spec.cpu_mark_single <= 0.0) {
                throw std::invalid_argument("gpu mode needs a positive cpu_mark_single");
            }
            const double gpu_mark = 0.5 * (*spec.gpu_g3d + *spec.gpu_g2d);
            return 0.5 * (spec.num_cpu * spec.cpu_mark_single + spec.num_gpu * gpu_mark);
        }
    }
    throw std::invalid_argument("invalid machine mode");
}

double normalize_budget(double t_max, double score, double base_score) {
    if (t_max <= 0.0 || score <= 0.0 || base_score <= 0.0) {
        throw std::invalid_argument("normalize_budget needs positive budget and scores");
    }
    return t_max * base_score / score;
}

double renormalize_time(double t, double score, double base_score) {
    if (t < 0.0) {
        throw std::invalid_argument("renormalize_time: time must be non-negative");
    }
    if (score <= 0.0 || base_score <= 0.0) {
        throw std::invalid_argument("renormalize_time needs positive scores");
    }
    return t * score / base_score;
}

Trajectory renormalize_trajectory(Trajectory trajectory, double score, double base_score) {
    for (auto& entry : trajectory.entries) {
        entry.t = renormalize_time(entry.t, score, base_score);
    }
    trajectory.budget = renormalize_time(trajectory.budget, score, base_score);
    trajectory.normalized = true;
    return trajectory;
}

MachineSpec parse_machine_spec(const std::string& text) {
    MachineSpec spec;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) {
                throw parse_error("machine spec line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            continue;
        }
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n\"");
            const auto e = s.find_last_not_of(" \t\r\n\"");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            if (key == "mode") {
                spec.mode = parse_machine_mode(value);
            } else if (key == "cpu_mark_single") {
                spec.cpu_mark_single = std::stod(value);
            } else if (key == "cpu_mark_multi") {
                spec.cpu_mark_multi = std::stod(value);
            } else if (key == "num_cpu") {
                spec.num_cpu = std::stoi(value);
            } else if (key == "gpu_g3d") {
                spec.gpu_g3d = std::stod(value);
            } else if (key == "gpu_g2d") {
                spec.gpu_g2d = std::stod(value);
            } else if (key == "num_gpu") {
                spec.num_gpu = std::stoi(value);
            } else {
                throw parse_error("machine spec line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
        } catch (const parse_error&) {
            throw;
        } catch (const std::exception& e) {
            throw parse_error("machine spec line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return spec;
}

MachineSpec load_machine_spec(const std::string& path) { return parse_machine_spec(read_file(path)); }

std::string machine_fingerprint(const MachineSpec& spec, const ReferenceBase& base) {
    return machine_mode_name(spec.mode) + ":" + format_number(machine_score(spec)) + "/base:" +
           format_number(base.score);
}

}  // namespace ra
