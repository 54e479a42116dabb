#include "panoclust/classes.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

constexpr std::string_view kSemanticKitti = R"(# SemanticKITTI panoptic classes
# name                 id   kind    [evaluated-as]
unlabeled               0   ignore
outlier                 1   ignore
car                    10   thing
bicycle                11   thing
bus                    13   thing   20
motorcycle             15   thing
on-rails               16   thing   20
truck                  18   thing
other-vehicle          20   thing
person                 30   thing
bicyclist              31   thing
motorcyclist           32   thing
road                   40   stuff
parking                44   stuff
sidewalk               48   stuff
other-ground           49   stuff
building               50   stuff
fence                  51   stuff
other-structure        52   ignore
lane-marking           60   stuff   40
vegetation             70   stuff
trunk                  71   stuff
terrain                72   stuff
pole                   80   stuff
traffic-sign           81   stuff
other-object           99   ignore
moving-car            252   thing   10
moving-bicyclist      253   thing   31
moving-person         254   thing   30
moving-motorcyclist   255   thing   32
moving-on-rails       256   thing   20
moving-bus            257   thing   20
moving-truck          258   thing   18
moving-other-vehicle  259   thing   20
)";

ClassId parse_id(const std::string& token, int line) {
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value > 0xFFFF) {
    throw ConfigError("class config line " + std::to_string(line) + ": bad class id '" + token + "'");
  }
  return static_cast<ClassId>(value);
}

}  // namespace

ClassConfig ClassConfig::parse(std::string_view text) {
  ClassConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  std::vector<std::pair<std::size_t, int>> aliases;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::string name, id, kind, target, extra;
    if (!(fields >> name)) continue;
    if (!(fields >> id >> kind)) {
      throw ConfigError("class config line " + std::to_string(line) + ": expected '<name> <id> <kind>'");
    }
    fields >> target;
    if (fields >> extra) throw ConfigError("class config line " + std::to_string(line) + ": trailing fields");

    ClassEntry e;
    e.name = name;
    e.id = parse_id(id, line);
    if (kind == "thing") {
      e.kind = ClassKind::thing;
    } else if (kind == "stuff") {
      e.kind = ClassKind::stuff;
    } else if (kind == "ignore") {
      e.kind = ClassKind::ignore;
    } else {
      throw ConfigError("class config line " + std::to_string(line) + ": unknown kind '" + kind + "'");
    }
    e.evaluated_as = target.empty() ? e.id : parse_id(target, line);
    if (const auto prev = cfg.lookup_[e.id]; prev != 0) {
      const auto& other = cfg.entries_[prev - 1];
      throw ConfigError("class id " + std::to_string(e.id) + " declared twice ('" + other.name + "' and '" + name +
                        "')" + (other.kind != e.kind ? ", in two different sets" : ""));
    }
    cfg.entries_.push_back(e);
    cfg.lookup_[e.id] = cfg.entries_.size();
    if (e.evaluated_as != e.id) aliases.emplace_back(cfg.entries_.size() - 1, line);
  }
  if (cfg.entries_.empty()) throw ConfigError("class config declares no classes");

  for (const auto& [index, at] : aliases) {
    const auto& e = cfg.entries_[index];
    const auto target = cfg.lookup_[e.evaluated_as];
    if (target == 0) {
      throw ConfigError("class config line " + std::to_string(at) + ": '" + e.name + "' evaluated as undeclared id " +
                        std::to_string(e.evaluated_as));
    }
    const auto& t = cfg.entries_[target - 1];
    if (t.evaluated_as != t.id) {
      throw ConfigError("class config line " + std::to_string(at) + ": alias target '" + t.name + "' is an alias");
    }
    if (t.kind != e.kind) {
      throw ConfigError("class config line " + std::to_string(at) + ": '" + e.name + "' and its target '" + t.name +
                        "' are in different sets");
    }
  }
  return cfg;
}

bool ClassConfig::known(ClassId raw) const { return lookup_[raw] != 0; }

std::optional<ClassKind> ClassConfig::kind_of(ClassId raw) const {
  if (const auto i = lookup_[raw]; i != 0) return entries_[i - 1].kind;
  return std::nullopt;
}

std::optional<ClassId> ClassConfig::canonical(ClassId raw) const {
  if (const auto i = lookup_[raw]; i != 0) return entries_[i - 1].evaluated_as;
  return std::nullopt;
}

std::set<ClassId> ClassConfig::thing_classes() const {
  std::set<ClassId> out;
  for (const auto& e : entries_)
    if (e.kind == ClassKind::thing && e.evaluated_as == e.id) out.insert(e.id);
  return out;
}

std::set<ClassId> ClassConfig::stuff_classes() const {
  std::set<ClassId> out;
  for (const auto& e : entries_)
    if (e.kind == ClassKind::stuff && e.evaluated_as == e.id) out.insert(e.id);
  return out;
}

std::set<ClassId> ClassConfig::ignore_classes() const {
  std::set<ClassId> out;
  for (const auto& e : entries_)
    if (e.kind == ClassKind::ignore) out.insert(e.id);
  return out;
}

std::string ClassConfig::name_of(ClassId id) const {
  if (const auto i = lookup_[id]; i != 0) return entries_[i - 1].name;
  return std::to_string(id);
}

ClassConfig load_class_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open class config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ClassConfig::parse(text.str());
}

ClassConfig default_class_config() { return ClassConfig::parse(kSemanticKitti); }

std::string_view default_class_config_text() { return kSemanticKitti; }

}  // namespace panoclust
