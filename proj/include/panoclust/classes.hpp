#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

enum class ClassKind { thing, stuff, ignore };

struct ClassEntry {
  std::string name;
  ClassId id = 0;
  ClassKind kind = ClassKind::ignore;
  /// Class this id is evaluated as (itself unless aliased, e.g. moving-car -> car).
  ClassId evaluated_as = 0;
};

/// Thing / stuff / ignore declaration of raw dataset class ids.
///
/// Text format, one class per line, '#' starts a comment:
///
///     <name> <id> thing|stuff|ignore [<evaluated-as id>]
///
/// The optional last column folds an id into another declared class of the
/// same kind, which is how the dataset's moving-object ids map onto their
/// static counterparts.
class ClassConfig {
 public:
  static ClassConfig parse(std::string_view text);

  const std::vector<ClassEntry>& entries() const { return entries_; }
  bool known(ClassId raw) const;
  /// Kind of a raw id; nullopt for undeclared ids.
  std::optional<ClassKind> kind_of(ClassId raw) const;
  /// Evaluated id of a raw id; nullopt for undeclared ids.
  std::optional<ClassId> canonical(ClassId raw) const;
  bool is_thing(ClassId raw) const { return kind_of(raw) == ClassKind::thing; }
  bool is_stuff(ClassId raw) const { return kind_of(raw) == ClassKind::stuff; }
  bool is_ignore(ClassId raw) const { return kind_of(raw) == ClassKind::ignore; }

  /// Evaluated (non-alias) class ids per kind.
  std::set<ClassId> thing_classes() const;
  std::set<ClassId> stuff_classes() const;
  std::set<ClassId> ignore_classes() const;
  std::string name_of(ClassId id) const;

 private:
  std::vector<ClassEntry> entries_;
  // Indexed by raw id: position in entries_ + 1, or 0 when undeclared.
  std::vector<std::size_t> lookup_ = std::vector<std::size_t>(65536, 0);
};

ClassConfig load_class_config(const std::filesystem::path& path);

/// SemanticKITTI panoptic classes: 8 things, 11 stuff, moving ids folded in.
ClassConfig default_class_config();
std::string_view default_class_config_text();

}  // namespace panoclust
