#include "ra/vrplib.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ra {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream stream(s);
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) {
        tokens.push_back(token);
    }
    return tokens;
}

double parse_double(const std::string& token, const std::string& context) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw parse_error(context + ": '" + token + "' is not a number");
    }
    if (consumed != token.size()) {
        throw parse_error(context + ": '" + token + "' is not a number");
    }
    return value;
}

// Smallest power of ten covering every coordinate; used when a file does not
// carry an explicit grid precision.
double infer_precision(const std::vector<Point>& coords) {
    double max_abs = 1.0;
    for (const auto& c : coords) {
        max_abs = std::max({max_abs, std::abs(c.x), std::abs(c.y)});
    }
    double p = 1.0;
    while (p < max_abs) {
        p *= 10.0;
    }
    return p;
}

bool is_integer_valued(double v) { return std::abs(v - std::round(v)) < 1e-9; }

std::string format_grid_value(double v) {
    if (is_integer_valued(v)) {
        return std::to_string(static_cast<long long>(std::llround(v)));
    }
    return format_number(v);
}

const char* kKnownHeaderKeys[] = {"NAME",     "COMMENT",     "TYPE",        "DIMENSION",  "EDGE_WEIGHT_TYPE",
                                  "CAPACITY", "TIME_LIMIT",  "BKS",         "COORDS_DIST", "DEPOT_TYPE",
                                  "DEMANDS_DIST", "GRID_PRECISION", "ROUNDING"};

bool is_known_key(const std::string& key) {
    return std::find(std::begin(kKnownHeaderKeys), std::end(kKnownHeaderKeys), key) != std::end(kKnownHeaderKeys);
}

}  // namespace

Instance parse_vrplib(const std::string& text) {
    std::istringstream stream(text);
    std::string line;

    std::map<std::string, std::string> header;
    std::vector<Point> coords;
    std::vector<double> demands;
    std::vector<bool> coord_seen;
    std::vector<bool> demand_seen;
    int depot_node = 1;  // 1-based file index
    bool saw_coords = false;
    bool saw_demands = false;
    int dimension = -1;

    enum class Section { Header, Coords, Demands, Depot };
    Section section = Section::Header;
    int line_no = 0;

    auto require_dimension = [&](const std::string& what) {
        if (dimension < 0) {
            throw parse_error(what + " before DIMENSION");
        }
    };

    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        if (stripped == "EOF") {
            break;
        }

        if (section == Section::Header || stripped.find("_SECTION") != std::string::npos) {
            if (stripped == "NODE_COORD_SECTION") {
                require_dimension("NODE_COORD_SECTION");
                section = Section::Coords;
                saw_coords = true;
                continue;
            }
            if (stripped == "DEMAND_SECTION") {
                require_dimension("DEMAND_SECTION");
                section = Section::Demands;
                saw_demands = true;
                continue;
            }
            if (stripped == "DEPOT_SECTION") {
                section = Section::Depot;
                continue;
            }
            if (stripped.find("_SECTION") != std::string::npos) {
                throw parse_error("line " + std::to_string(line_no) + ": unsupported section '" + stripped + "'");
            }
        }

        switch (section) {
            case Section::Header: {
                const auto colon = stripped.find(':');
                if (colon == std::string::npos) {
                    throw parse_error("line " + std::to_string(line_no) + ": expected 'KEY : VALUE', got '" + stripped + "'");
                }
                const std::string key = trim(stripped.substr(0, colon));
                const std::string value = trim(stripped.substr(colon + 1));
                header[key] = value;
                if (key == "DIMENSION") {
                    dimension = static_cast<int>(parse_double(value, "DIMENSION"));
                    if (dimension < 2) {
                        throw parse_error("DIMENSION must be at least 2");
                    }
                    coords.assign(static_cast<std::size_t>(dimension), Point{});
                    demands.assign(static_cast<std::size_t>(dimension), 0.0);
                    coord_seen.assign(static_cast<std::size_t>(dimension), false);
                    demand_seen.assign(static_cast<std::size_t>(dimension), false);
                }
                break;
            }
            case Section::Coords: {
                const auto tokens = split_ws(stripped);
                if (tokens.size() != 3) {
                    throw parse_error("line " + std::to_string(line_no) + ": coordinate lines need '<node> <x> <y>'");
                }
                const int node = static_cast<int>(parse_double(tokens[0], "node index"));
                if (node < 1 || node > dimension) {
                    throw parse_error("line " + std::to_string(line_no) + ": node index outside 1..DIMENSION");
                }
                coords[static_cast<std::size_t>(node - 1)] = {parse_double(tokens[1], "x coordinate"),
                                                              parse_double(tokens[2], "y coordinate")};
                coord_seen[static_cast<std::size_t>(node - 1)] = true;
                break;
            }
            case Section::Demands: {
                const auto tokens = split_ws(stripped);
                if (tokens.size() != 2) {
                    throw parse_error("line " + std::to_string(line_no) + ": demand lines need '<node> <demand>'");
                }
                const int node = static_cast<int>(parse_double(tokens[0], "node index"));
                if (node < 1 || node > dimension) {
                    throw parse_error("line " + std::to_string(line_no) + ": node index outside 1..DIMENSION");
                }
                demands[static_cast<std::size_t>(node - 1)] = parse_double(tokens[1], "demand");
                demand_seen[static_cast<std::size_t>(node - 1)] = true;
                break;
            }
            case Section::Depot: {
                const int node = static_cast<int>(parse_double(stripped, "depot node"));
                if (node == -1) {
                    section = Section::Header;
                } else {
                    depot_node = node;
                }
                break;
            }
        }
    }

    for (const char* key : {"NAME", "DIMENSION", "CAPACITY", "EDGE_WEIGHT_TYPE"}) {
        if (header.find(key) == header.end()) {
            throw parse_error(std::string("missing mandatory key ") + key);
        }
    }
    if (!saw_coords) {
        throw parse_error("missing NODE_COORD_SECTION");
    }
    if (!saw_demands) {
        throw parse_error("missing DEMAND_SECTION");
    }
    if (header["EDGE_WEIGHT_TYPE"] != "EUC_2D") {
        throw parse_error("unsupported EDGE_WEIGHT_TYPE '" + header["EDGE_WEIGHT_TYPE"] + "' (only EUC_2D)");
    }
    for (int i = 0; i < dimension; ++i) {
        if (!coord_seen[static_cast<std::size_t>(i)]) {
            throw parse_error("NODE_COORD_SECTION does not cover node " + std::to_string(i + 1) +
                              " (DIMENSION mismatch)");
        }
        if (!demand_seen[static_cast<std::size_t>(i)]) {
            throw parse_error("DEMAND_SECTION does not cover node " + std::to_string(i + 1) + " (DIMENSION mismatch)");
        }
    }
    if (depot_node < 1 || depot_node > dimension) {
        throw parse_error("DEPOT_SECTION names node outside 1..DIMENSION");
    }

    Instance instance;
    instance.id = header["NAME"];
    instance.capacity = parse_double(header["CAPACITY"], "CAPACITY");
    instance.coords = std::move(coords);
    instance.demands = std::move(demands);

    // Relocate the depot to index 0, keeping the relative order of the rest.
    if (depot_node != 1) {
        const std::size_t d = static_cast<std::size_t>(depot_node - 1);
        std::rotate(instance.coords.begin(), instance.coords.begin() + static_cast<std::ptrdiff_t>(d),
                    instance.coords.begin() + static_cast<std::ptrdiff_t>(d) + 1);
        std::rotate(instance.demands.begin(), instance.demands.begin() + static_cast<std::ptrdiff_t>(d),
                    instance.demands.begin() + static_cast<std::ptrdiff_t>(d) + 1);
    }
    if (instance.demands[0] != 0.0) {
        throw parse_error("depot demand must be 0");
    }

    for (const auto& [key, value] : header) {
        if (key == "TIME_LIMIT") {
            instance.time_limit = parse_double(value, "TIME_LIMIT");
        } else if (key == "BKS") {
            instance.bks_cost = parse_double(value, "BKS");
        } else if (key == "COORDS_DIST") {
            instance.coords_dist = value;
        } else if (key == "DEPOT_TYPE") {
            instance.depot_type = value;
        } else if (key == "DEMANDS_DIST") {
            instance.demands_dist = value;
        } else if (key == "COMMENT") {
            instance.tags["COMMENT"] = value;
        } else if (!is_known_key(key)) {
            instance.tags[key] = value;
        }
    }

    if (const auto it = header.find("GRID_PRECISION"); it != header.end()) {
        instance.grid_scale = GridScale::integer_grid(parse_double(it->second, "GRID_PRECISION"));
    } else {
        instance.grid_scale = GridScale::integer_grid(infer_precision(instance.coords));
    }
    // Integer-grid files follow the round-to-nearest convention unless the
    // file says otherwise (our writer makes that explicit).
    if (const auto it = header.find("ROUNDING"); it != header.end()) {
        if (it->second == "exact") {
            instance.rounding = Rounding::Exact;
        } else if (it->second == "round") {
            instance.rounding = Rounding::RoundToNearestInt;
        } else {
            throw parse_error("ROUNDING must be exact or round, got '" + it->second + "'");
        }
    } else {
        instance.rounding = Rounding::RoundToNearestInt;
    }

    try {
        validate_instance(instance);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what());
    }
    return instance;
}

std::string write_vrplib(const Instance& instance) {
    if (instance.grid_scale.kind != GridScale::Kind::IntegerGrid) {
        throw std::invalid_argument("write_vrplib: instance must be on an integer grid (rescale first)");
    }
    std::ostringstream out;
    out << "NAME : " << instance.id << "\n";
    if (const auto it = instance.tags.find("COMMENT"); it != instance.tags.end()) {
        out << "COMMENT : " << it->second << "\n";
    }
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << instance.coords.size() << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "CAPACITY : " << format_grid_value(instance.capacity) << "\n";
    out << "GRID_PRECISION : " << format_grid_value(instance.grid_scale.precision) << "\n";
    out << "ROUNDING : " << (instance.rounding == Rounding::Exact ? "exact" : "round") << "\n";
    if (instance.time_limit) {
        out << "TIME_LIMIT : " << format_number(*instance.time_limit) << "\n";
    }
    if (instance.bks_cost) {
        out << "BKS : " << format_number(*instance.bks_cost) << "\n";
    }
    if (!instance.coords_dist.empty()) {
        out << "COORDS_DIST : " << instance.coords_dist << "\n";
    }
    if (!instance.depot_type.empty()) {
        out << "DEPOT_TYPE : " << instance.depot_type << "\n";
    }
    if (!instance.demands_dist.empty()) {
        out << "DEMANDS_DIST : " << instance.demands_dist << "\n";
    }
    for (const auto& [key, value] : instance.tags) {  // std::map keeps this sorted
        if (key != "COMMENT") {
            out << key << " : " << value << "\n";
        }
    }
    out << "NODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < instance.coords.size(); ++i) {
        out << (i + 1) << " " << format_grid_value(instance.coords[i].x) << " "
            << format_grid_value(instance.coords[i].y) << "\n";
    }
    out << "DEMAND_SECTION\n";
    for (std::size_t i = 0; i < instance.demands.size(); ++i) {
        out << (i + 1) << " " << format_grid_value(instance.demands[i]) << "\n";
    }
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
    return out.str();
}

BksRegistry load_bks_registry(const std::string& text) {
    BksRegistry registry;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        const auto tokens = split_ws(stripped);
        if (tokens.size() != 4 && tokens.size() != 5) {
            throw parse_error("bks line " + std::to_string(line_no) + ": expected '<id> <cost> <algorithm> <opt|not_opt> [routes]'");
        }
        BksRecord record;
        record.instance_id = tokens[0];
        record.cost = parse_double(tokens[1], "bks line " + std::to_string(line_no) + " cost");
        if (record.cost <= 0.0) {
            throw parse_error("bks line " + std::to_string(line_no) + ": cost must be positive");
        }
        record.algorithm = tokens[2];
        if (tokens[3] == "opt") {
            record.optimal = true;
        } else if (tokens[3] == "not_opt") {
            record.optimal = false;
        } else {
            throw parse_error("bks line " + std::to_string(line_no) + ": flag must be opt or not_opt");
        }
        if (tokens.size() == 5) {
            record.routes = parse_routes(tokens[4], "bks line " + std::to_string(line_no));
        }
        registry[record.instance_id] = std::move(record);
    }
    return registry;
}

std::string store_bks_registry(const BksRegistry& registry) {
    std::ostringstream out;
    for (const auto& [id, record] : registry) {
        out << id << " " << format_number(record.cost) << " " << record.algorithm << " "
            << (record.optimal ? "opt" : "not_opt");
        if (!record.routes.empty()) {
            out << " " << format_routes(record.routes);
        }
        out << "\n";
    }
    return out.str();
}

void validate_bks_record(const BksRecord& record, const Instance& instance) {
    if (record.routes.empty()) {
        return;
    }
    const auto report = check_feasibility(instance, make_solution(instance, record.routes));
    if (!report.ok) {
        throw std::invalid_argument("bks record '" + record.instance_id + "': routes are infeasible");
    }
    const double cost = evaluate_cost(instance, record.routes);
    if (std::abs(cost - record.cost) > 1e-6 * std::max(1.0, std::abs(record.cost))) {
        throw std::invalid_argument("bks record '" + record.instance_id + "': routes cost " + format_number(cost) +
                                    " but declared cost is " + format_number(record.cost));
    }
}

namespace {

void check_running_sequences(const ResultRecord& record) {
    if (record.running_costs.size() != record.running_times.size()) {
        throw std::invalid_argument("result record: running_costs and running_times lengths differ");
    }
    for (std::size_t i = 1; i < record.running_times.size(); ++i) {
        if (record.running_times[i] <= record.running_times[i - 1]) {
            throw std::invalid_argument("result record: running_times must be strictly increasing");
        }
        if (record.running_costs[i] >= record.running_costs[i - 1]) {
            throw std::invalid_argument("result record: running_costs must be strictly decreasing");
        }
    }
}

nlohmann::json record_to_json(const ResultRecord& record) {
    nlohmann::json j;
    j["instance_id"] = record.instance_id;
    j["solver_id"] = record.solver_id;
    j["run_index"] = record.run_index;
    j["cost"] = record.cost ? nlohmann::json(*record.cost) : nlohmann::json(nullptr);
    j["gap"] = record.gap_percent ? nlohmann::json(*record.gap_percent) : nlohmann::json(nullptr);
    j["pi_score"] = record.pi_score;
    j["wrap_score"] = record.wrap_score;
    j["num_vehicles"] = record.num_vehicles;
    j["normalized_budget"] = record.normalized_budget;
    j["bks_cost"] = record.bks_cost ? nlohmann::json(*record.bks_cost) : nlohmann::json(nullptr);
    j["running_costs"] = record.running_costs;
    j["running_times"] = record.running_times;
    j["machine"] = record.machine;
    j["set"] = record.set;
    return j;
}

ResultRecord record_from_json(const nlohmann::json& j) {
    ResultRecord record;
    record.instance_id = j.at("instance_id").get<std::string>();
    record.solver_id = j.at("solver_id").get<std::string>();
    record.run_index = j.at("run_index").get<int>();
    if (!j.at("cost").is_null()) {
        record.cost = j.at("cost").get<double>();
    }
    if (!j.at("gap").is_null()) {
        record.gap_percent = j.at("gap").get<double>();
    }
    record.pi_score = j.at("pi_score").get<double>();
    record.wrap_score = j.at("wrap_score").get<double>();
    record.num_vehicles = j.at("num_vehicles").get<int>();
    record.normalized_budget = j.at("normalized_budget").get<double>();
    if (!j.at("bks_cost").is_null()) {
        record.bks_cost = j.at("bks_cost").get<double>();
    }
    record.running_costs = j.at("running_costs").get<std::vector<double>>();
    record.running_times = j.at("running_times").get<std::vector<double>>();
    record.machine = j.value("machine", "");
    record.set = j.value("set", "");
    return record;
}

}  // namespace

std::string write_results(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    for (const auto& record : records) {
        check_running_sequences(record);
        out << record_to_json(record).dump() << "\n";
    }
    return out.str();
}

std::vector<ResultRecord> read_results(const std::string& text) {
    std::vector<ResultRecord> records;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(stripped);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error("results line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            ResultRecord record = record_from_json(j);
            check_running_sequences(record);
            records.push_back(std::move(record));
        } catch (const std::exception& e) {
            throw parse_error("results line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::string write_trajectory(const Trajectory& trajectory) {
    nlohmann::json j;
    j["produced_by"] = trajectory.produced_by;
    j["budget"] = trajectory.budget;
    j["normalized"] = trajectory.normalized;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : trajectory.entries) {
        nlohmann::json e;
        e["t"] = entry.t;
        e["cost"] = entry.cost;
        if (entry.solution) {
            e["routes"] = entry.solution->routes;
        }
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j.dump();
}

Trajectory read_trajectory(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("trajectory: ") + e.what());
    }
    Trajectory trajectory;
    trajectory.produced_by = j.at("produced_by").get<std::string>();
    trajectory.budget = j.at("budget").get<double>();
    trajectory.normalized = j.at("normalized").get<bool>();
    for (const auto& e : j.at("entries")) {
        TrajectoryEntry entry;
        entry.t = e.at("t").get<double>();
        entry.cost = e.at("cost").get<double>();
        if (e.contains("routes")) {
            Solution solution;
            solution.routes = e.at("routes").get<std::vector<std::vector<int>>>();
            solution.cost = entry.cost;
            solution.num_vehicles = static_cast<int>(std::count_if(solution.routes.begin(), solution.routes.end(),
                                                                   [](const auto& r) { return !r.empty(); }));
            entry.solution = std::move(solution);
        }
        trajectory.entries.push_back(std::move(entry));
    }
    validate_trajectory(trajectory);
    return trajectory;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string format_number(double value) { return nlohmann::json(value).dump(); }

std::string format_routes(const std::vector<std::vector<int>>& routes) {
    std::string out;
    for (std::size_t r = 0; r < routes.size(); ++r) {
        if (r > 0) {
            out += ';';
        }
        for (std::size_t i = 0; i < routes[r].size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += std::to_string(routes[r][i]);
        }
    }
    return out;
}

std::vector<std::vector<int>> parse_routes(const std::string& text, const std::string& context) {
    std::vector<std::vector<int>> routes;
    std::istringstream route_stream(text);
    std::string route_text;
    while (std::getline(route_stream, route_text, ';')) {
        std::vector<int> route;
        std::istringstream node_stream(route_text);
        std::string node_text;
        while (std::getline(node_stream, node_text, ',')) {
            const std::string t = trim(node_text);
            if (t.empty()) {
                throw parse_error(context + ": empty route entry");
            }
            try {
                route.push_back(std::stoi(t));
            } catch (const std::exception&) {
                throw parse_error(context + ": '" + t + "' is not a customer index");
            }
        }
        if (!route.empty()) {
            routes.push_back(std::move(route));
        }
    }
    return routes;
}

}  // namespace ra
