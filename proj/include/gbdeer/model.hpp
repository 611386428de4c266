#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gbdeer
{

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class Role : std::uint8_t { Supervisor, Subordinate, Common };
enum class GafState : std::uint8_t { Discovery, Active, Sleep };

/// The three discrete transmission settings, ordered weakest first.
enum class Level : std::uint8_t { Tmin = 0, Tmid = 1, Tmax = 2 };

inline constexpr std::array<Level, 3> kAllLevels{Level::Tmin, Level::Tmid, Level::Tmax};

std::string_view to_string(Role r);
std::string_view to_string(GafState s);
std::string_view to_string(Level l);
std::optional<Level> parse_level(std::string_view name);

struct PowerLevel
{
    Level level = Level::Tmin;
    double range = 0.0;  // meters
};

/// Ordered Tmin, Tmid, Tmax once the owning config has been validated.
struct PowerTable
{
    std::array<PowerLevel, 3> levels{};

    double range(Level l) const { return levels[static_cast<std::size_t>(l)].range; }
    double max_range() const { return range(Level::Tmax); }
};

struct NodeState
{
    int id = 0;
    Vec2 pos;
    Vec2 vel;
    double e_init = 0.0;
    double e_res = 0.0;
    Role role = Role::Common;
    GafState gaf_state = GafState::Sleep;
    bool alive = true;

    double speed() const { return vel.norm(); }
};

struct EnergyParams
{
    double e_elec = 50e-9;   // J/bit
    double e_amp = 100e-12;  // J/bit/m^2
    double p_idle = 0.01;    // W
    double p_sleep = 1e-4;   // W
};

struct MobilityParams
{
    double v_min = 0.0;
    double v_max = 0.0;
    double pause = 0.0;
};

struct FlowSpec
{
    int src = 0;
    int dst = 0;
    std::int64_t packet_size_bits = 1000;
    double interval = 1.0;
    double start = 0.0;
    double stop = 0.0;
};

/// Per-node scripting used by hand-built scenarios. A node with `vel` set
/// moves in a straight line at that velocity until it reaches the area edge.
struct NodeOverride
{
    int id = 0;
    std::optional<Vec2> pos;
    std::optional<Vec2> vel;
    std::optional<double> e_res;
};

enum class Protocol : std::uint8_t { Gbdeer, GafFixed, MinHop };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);
inline constexpr std::string_view kProtocolNames = "gbdeer, gaf-fixed, minhop";

struct ScenarioConfig
{
    double area_w = 0.0;
    double area_h = 0.0;
    int n_nodes = 0;
    double radio_range_R = 0.0;
    PowerTable power_table{};
    double e_init = 0.0;
    EnergyParams energy_params{};
    double handover_threshold = 0.0;
    double maintenance_interval = 1.0;
    MobilityParams mobility{};
    std::vector<FlowSpec> traffic;
    double duration = 0.0;
    std::uint64_t seed = 0;
    Protocol protocol = Protocol::Gbdeer;

    // Optional knobs; all have defaults when absent from a config file.
    std::int64_t control_bits = 64;
    double hop_latency = 0.002;
    double mobility_tick = 1.0;
    double weight_alpha = 0.5;
    std::vector<NodeOverride> nodes;
};

/// Reasonable desk-scale defaults: ranges (80, 160, 250) m, 5 J batteries,
/// 0.5 J handover threshold, first-order radio constants.
ScenarioConfig default_config();

enum class ControlKind : std::uint8_t { ListenCtrl, AckListenCtrl, SupervisorError };

struct ControlPacket
{
    ControlKind kind = ControlKind::ListenCtrl;
    int sender = 0;
    int receiver = 0;
    Level level = Level::Tmin;
    double timestamp = 0.0;
};

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Checks every config invariant, returning the config with its power table
/// sorted Tmin, Tmid, Tmax. Throws ConfigError naming the first violation.
ScenarioConfig validate_config(ScenarioConfig cfg);

}  // namespace gbdeer
