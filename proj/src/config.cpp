#include "gbdeer/config.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gbdeer
{

using nlohmann::json;

namespace
{

const json& field(const json& obj, const char* name, std::string_view where = {})
{
    if (!obj.is_object() || !obj.contains(name))
    {
        if (where.empty())
        {
            throw ConfigError(fmt::format("missing field: {}", name));
        }
        throw ConfigError(fmt::format("missing field: {}.{}", where, name));
    }
    return obj.at(name);
}

template <typename T>
T read(const json& obj, const char* name, std::string_view where = {})
{
    const json& v = field(obj, name, where);
    try
    {
        return v.get<T>();
    }
    catch (const json::exception&)
    {
        throw ConfigError(fmt::format("field {} has the wrong type", name));
    }
}

template <typename T>
void read_optional(const json& obj, const char* name, T& out)
{
    if (obj.contains(name))
    {
        out = read<T>(obj, name);
    }
}

Vec2 read_vec(const json& v, const char* name)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    {
        throw ConfigError(fmt::format("field {} must be [x, y]", name));
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace

ScenarioConfig parse_config(const std::string& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object())
    {
        throw ConfigError("config must be a JSON object");
    }

    ScenarioConfig cfg;
    cfg.area_w = read<double>(doc, "area_w");
    cfg.area_h = read<double>(doc, "area_h");
    cfg.n_nodes = read<int>(doc, "n_nodes");
    cfg.radio_range_R = read<double>(doc, "radio_range_R");

    const json& table = field(doc, "power_table");
    if (!table.is_array() || table.size() != 3)
    {
        throw ConfigError("PowerTable: power_table must list exactly three levels");
    }
    for (std::size_t i = 0; i < 3; ++i)
    {
        const auto name = read<std::string>(table[i], "level", "power_table");
        const auto level = parse_level(name);
        if (!level)
        {
            throw ConfigError(fmt::format("PowerTable: unknown level '{}' (expected Tmin, Tmid, Tmax)", name));
        }
        cfg.power_table.levels[i] = PowerLevel{*level, read<double>(table[i], "range", "power_table")};
    }

    cfg.e_init = read<double>(doc, "e_init");
    const json& ep = field(doc, "energy_params");
    cfg.energy_params.e_elec = read<double>(ep, "e_elec", "energy_params");
    cfg.energy_params.e_amp = read<double>(ep, "e_amp", "energy_params");
    cfg.energy_params.p_idle = read<double>(ep, "p_idle", "energy_params");
    cfg.energy_params.p_sleep = read<double>(ep, "p_sleep", "energy_params");
    cfg.handover_threshold = read<double>(doc, "handover_threshold");
    cfg.maintenance_interval = read<double>(doc, "maintenance_interval");

    const json& mob = field(doc, "mobility");
    cfg.mobility.v_min = read<double>(mob, "v_min", "mobility");
    cfg.mobility.v_max = read<double>(mob, "v_max", "mobility");
    cfg.mobility.pause = read<double>(mob, "pause", "mobility");

    const json& traffic = field(doc, "traffic");
    if (!traffic.is_array())
    {
        throw ConfigError("field traffic must be a list");
    }
    for (const auto& f : traffic)
    {
        FlowSpec spec;
        spec.src = read<int>(f, "src", "traffic");
        spec.dst = read<int>(f, "dst", "traffic");
        spec.packet_size_bits = read<std::int64_t>(f, "packet_size_bits", "traffic");
        spec.interval = read<double>(f, "interval", "traffic");
        spec.start = read<double>(f, "start", "traffic");
        spec.stop = read<double>(f, "stop", "traffic");
        cfg.traffic.push_back(spec);
    }

    cfg.duration = read<double>(doc, "duration");
    cfg.seed = read<std::uint64_t>(doc, "seed");
    const auto proto = read<std::string>(doc, "protocol");
    const auto parsed = parse_protocol(proto);
    if (!parsed)
    {
        throw ConfigError(fmt::format("unknown protocol '{}' (valid: {})", proto, kProtocolNames));
    }
    cfg.protocol = *parsed;

    read_optional(doc, "control_bits", cfg.control_bits);
    read_optional(doc, "hop_latency", cfg.hop_latency);
    read_optional(doc, "mobility_tick", cfg.mobility_tick);
    read_optional(doc, "weight_alpha", cfg.weight_alpha);
    if (doc.contains("nodes"))
    {
        for (const auto& n : doc.at("nodes"))
        {
            NodeOverride o;
            o.id = read<int>(n, "id", "nodes");
            if (n.contains("pos"))
            {
                o.pos = read_vec(n.at("pos"), "nodes.pos");
            }
            if (n.contains("vel"))
            {
                o.vel = read_vec(n.at("vel"), "nodes.vel");
            }
            if (n.contains("e_res"))
            {
                o.e_res = read<double>(n, "e_res", "nodes");
            }
            cfg.nodes.push_back(o);
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot read config file {}", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ScenarioConfig& cfg)
{
    json doc;
    doc["area_w"] = cfg.area_w;
    doc["area_h"] = cfg.area_h;
    doc["n_nodes"] = cfg.n_nodes;
    doc["radio_range_R"] = cfg.radio_range_R;
    json table = json::array();
    for (const auto& p : cfg.power_table.levels)
    {
        table.push_back({{"level", std::string(to_string(p.level))}, {"range", p.range}});
    }
    doc["power_table"] = table;
    doc["e_init"] = cfg.e_init;
    doc["energy_params"] = {{"e_elec", cfg.energy_params.e_elec},
                            {"e_amp", cfg.energy_params.e_amp},
                            {"p_idle", cfg.energy_params.p_idle},
                            {"p_sleep", cfg.energy_params.p_sleep}};
    doc["handover_threshold"] = cfg.handover_threshold;
    doc["maintenance_interval"] = cfg.maintenance_interval;
    doc["mobility"] = {{"v_min", cfg.mobility.v_min}, {"v_max", cfg.mobility.v_max}, {"pause", cfg.mobility.pause}};
    json traffic = json::array();
    for (const auto& f : cfg.traffic)
    {
        traffic.push_back({{"src", f.src},
                           {"dst", f.dst},
                           {"packet_size_bits", f.packet_size_bits},
                           {"interval", f.interval},
                           {"start", f.start},
                           {"stop", f.stop}});
    }
    doc["traffic"] = traffic;
    doc["duration"] = cfg.duration;
    doc["seed"] = cfg.seed;
    doc["protocol"] = std::string(to_string(cfg.protocol));
    doc["control_bits"] = cfg.control_bits;
    doc["hop_latency"] = cfg.hop_latency;
    doc["mobility_tick"] = cfg.mobility_tick;
    doc["weight_alpha"] = cfg.weight_alpha;
    if (!cfg.nodes.empty())
    {
        json nodes = json::array();
        for (const auto& o : cfg.nodes)
        {
            json n{{"id", o.id}};
            if (o.pos)
            {
                n["pos"] = vec_json(*o.pos);
            }
            if (o.vel)
            {
                n["vel"] = vec_json(*o.vel);
            }
            if (o.e_res)
            {
                n["e_res"] = *o.e_res;
            }
            nodes.push_back(n);
        }
        doc["nodes"] = nodes;
    }
    return doc.dump(2) + "\n";
}

}  // namespace gbdeer
