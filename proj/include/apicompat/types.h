/*
 * Copyright (C) 2026 The apicompat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Domain types shared by every stage of the mining and checking pipeline.

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apicompat {

/// An integer framework API level. Always >= 1.
class ApiLevel {
 public:
  ApiLevel() = default;
  explicit ApiLevel(int value);

  int value() const { return value_; }

  auto operator<=>(const ApiLevel&) const = default;

 private:
  int value_ = 1;
};

/// An adjacent pair of levels present in a corpus, e.g. (15, 16) or (10, 14)
/// when the corpus has gaps.
struct Boundary {
  ApiLevel from;
  ApiLevel to;

  auto operator<=>(const Boundary&) const = default;
};

std::string boundary_string(const Boundary& b);  // "15:16"

/// Identity of a framework method plus its declared return type.
///
/// The identity key is (class_fqn, method_name, param_types). Return type is
/// carried along but does not participate in identity: the subject language
/// forbids overloads that differ only in return type.
struct ApiSignature {
  std::string class_fqn;
  std::string method_name;
  std::vector<std::string> param_types;
  std::string return_type;

  std::string identity_key() const;
  bool same_identity(const ApiSignature& other) const;

  bool operator==(const ApiSignature&) const = default;
};

/// Canonical rendering: `<a.b.C: ret name(p1,p2)>`.
std::string render_signature(const ApiSignature& sig);

/// Parses the angle-bracket signature format. Whitespace-insensitive,
/// generic arguments are erased and varargs become arrays.
/// Throws SignatureParseError with the offending offset.
ApiSignature normalize_signature(std::string_view raw);

/// One framework method at one API level.
struct ApiRecord {
  ApiSignature signature;
  ApiLevel level;
  std::string body;  // includes the outermost braces; empty when abstract
  std::vector<std::string> annotations;
  std::string comment;
  std::vector<std::string> thrown_types;  // declared `throws` clause
  std::string file;
  int line = 0;
  bool is_public = true;

  bool operator==(const ApiRecord&) const = default;
};

/// Small value-semantic set over an enum with < 32 members.
template <typename E>
class EnumSet {
 public:
  EnumSet() = default;
  EnumSet(std::initializer_list<E> values) {
    for (E v : values) insert(v);
  }

  void insert(E v) { bits_ |= bit(v); }
  void erase(E v) { bits_ &= ~bit(v); }
  bool contains(E v) const { return (bits_ & bit(v)) != 0; }
  bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  void merge(const EnumSet& other) { bits_ |= other.bits_; }
  bool includes(const EnumSet& other) const {
    return (bits_ & other.bits_) == other.bits_;
  }
  std::uint32_t bits() const { return bits_; }

  bool operator==(const EnumSet&) const = default;
  auto operator<=>(const EnumSet&) const = default;

  /// Members in declaration order.
  template <int N>
  std::vector<E> members() const {
    std::vector<E> out;
    for (int i = 0; i < N; ++i) {
      if (bits_ & (1u << i)) out.push_back(static_cast<E>(i));
    }
    return out;
  }

 private:
  static std::uint32_t bit(E v) { return 1u << static_cast<int>(v); }
  std::uint32_t bits_ = 0;
};

enum class ChangeType {
  kReturnStatementChanged,
  kExceptionHandlingStatementChanged,
  kControlDependencyChanged,
  kOtherStatementChanged,
  kDependentApiChanged,
  kNoChange,
};
inline constexpr int kChangeTypeCount = 6;
using ChangeTypeSet = EnumSet<ChangeType>;

std::string_view change_type_name(ChangeType t);
std::optional<ChangeType> parse_change_type(std::string_view name);  // case-insensitive
std::vector<ChangeType> members(const ChangeTypeSet& s);
std::vector<std::string> change_type_names(const ChangeTypeSet& s);

/// Labels for both kinds of incompatibility entry.
enum class IncompatLabel {
  kAddition,
  kRemoval,
  kReturnValueAlteration,
  kExceptionHandlingModification,
};
inline constexpr int kIncompatLabelCount = 4;
using LabelSet = EnumSet<IncompatLabel>;

std::string_view label_name(IncompatLabel l);        // "Return Value Alteration"
std::string_view label_short_name(IncompatLabel l);  // "RVA"
std::optional<IncompatLabel> parse_label(std::string_view name);  // long or short, case-insensitive
std::vector<IncompatLabel> members(const LabelSet& s);
std::vector<std::string> label_names(const LabelSet& s);

inline const LabelSet kSemanticLabels{IncompatLabel::kReturnValueAlteration,
                                      IncompatLabel::kExceptionHandlingModification};
inline const LabelSet kSignatureLabels{IncompatLabel::kAddition,
                                       IncompatLabel::kRemoval};

/// A benchmark or demonstration item: one retained-changed pair with gold
/// annotations.
struct LabeledPair {
  ApiRecord old_record;
  ApiRecord new_record;
  ChangeTypeSet gold_change_types;
  LabelSet gold_labels;
};

}  // namespace apicompat
