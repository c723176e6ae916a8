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

#include <gtest/gtest.h>

#include "apicompat/error.h"
#include "apicompat/types.h"

namespace apicompat {
namespace {

TEST(NormalizeSignature, SpacedNestedClass) {
  const auto s = normalize_signature("< android.hardware.Camera.Parameters : Size getPictureSize () >");
  EXPECT_EQ(s.class_fqn, "android.hardware.Camera.Parameters");
  EXPECT_EQ(s.method_name, "getPictureSize");
  EXPECT_TRUE(s.param_types.empty());
  EXPECT_EQ(s.return_type, "Size");
}

TEST(NormalizeSignature, ArrayReturn) {
  const auto s = normalize_signature("<android.view.InputDevice: int[] getDeviceIds()>");
  EXPECT_EQ(s.class_fqn, "android.view.InputDevice");
  EXPECT_EQ(s.method_name, "getDeviceIds");
  EXPECT_TRUE(s.param_types.empty());
  EXPECT_EQ(s.return_type, "int[]");
}

TEST(NormalizeSignature, WhitespaceInsensitive) {
  EXPECT_EQ(normalize_signature("<a.B: void f(int,int)>"),
            normalize_signature("<a.B:  void  f( int , int )>"));
}

TEST(NormalizeSignature, GenericsErasedAndVarargsBecomeArrays) {
  const auto s = normalize_signature("<a.B: java.util.List<String> f(Map<K, V>, int...)>");
  EXPECT_EQ(s.return_type, "java.util.List");
  EXPECT_EQ(s.param_types, (std::vector<std::string>{"Map", "int[]"}));
}

TEST(NormalizeSignature, RoundTrip) {
  for (const char* raw : {"<a.B: void f()>", "<android.content.res.TypedArray: boolean getBoolean(int,boolean)>",
                          "<x.Y.Z: int[][] g(String[],long)>"}) {
    const auto s = normalize_signature(raw);
    EXPECT_EQ(render_signature(s), raw);
    EXPECT_EQ(normalize_signature(render_signature(s)), s);
  }
}

TEST(NormalizeSignature, ErrorCarriesOffset) {
  try {
    normalize_signature("<a.B void f()>");
    FAIL() << "expected a parse error";
  } catch (const SignatureParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignatureParse);
    EXPECT_GT(e.offset(), 0u);
  }
  EXPECT_THROW(normalize_signature(""), SignatureParseError);
  EXPECT_THROW(normalize_signature("<a.B: void f(int>"), SignatureParseError);
}

TEST(ApiSignature, IdentityExcludesReturnType) {
  const auto a = normalize_signature("<a.B: int f(int)>");
  const auto b = normalize_signature("<a.B: long f(int)>");
  EXPECT_TRUE(a.same_identity(b));
  EXPECT_NE(a, b);
  EXPECT_FALSE(a.same_identity(normalize_signature("<a.B: int f(long)>")));
}

TEST(ApiLevel, RejectsNonPositive) {
  EXPECT_THROW(ApiLevel(0), Error);
  EXPECT_EQ(ApiLevel(15).value(), 15);
  EXPECT_EQ(boundary_string({ApiLevel(15), ApiLevel(16)}), "15:16");
}

TEST(Labels, ParseLongAndShortNames) {
  EXPECT_EQ(parse_label("RVA"), IncompatLabel::kReturnValueAlteration);
  EXPECT_EQ(parse_label("exception handling modification"),
            IncompatLabel::kExceptionHandlingModification);
  EXPECT_EQ(parse_label("Addition"), IncompatLabel::kAddition);
  EXPECT_FALSE(parse_label("Sideways").has_value());
  EXPECT_EQ(parse_change_type("no change"), ChangeType::kNoChange);
  EXPECT_EQ(change_type_name(ChangeType::kDependentApiChanged), "Dependent API Changed");
}

TEST(EnumSet, SetOperations) {
  LabelSet s{IncompatLabel::kReturnValueAlteration};
  s.insert(IncompatLabel::kExceptionHandlingModification);
  EXPECT_EQ(s.size(), 2);
  EXPECT_TRUE(kSemanticLabels.includes(s));
  EXPECT_FALSE(kSignatureLabels.includes(s));
  EXPECT_EQ(label_names(s), (std::vector<std::string>{"Return Value Alteration",
                                                      "Exception Handling Modification"}));
  s.erase(IncompatLabel::kReturnValueAlteration);
  EXPECT_EQ(members(s), std::vector<IncompatLabel>{IncompatLabel::kExceptionHandlingModification});
}

}  // namespace
}  // namespace apicompat
