// Copyright 2026 The ctxwatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTXWATCH_SRC_XML_XML_UTIL_HPP_
#define CTXWATCH_SRC_XML_XML_UTIL_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxwatch::xml {

class Document;

/// Read-only view of an element that knows its source line and path, so
/// schema violations can point at the offending element.
class Element {
 public:
  std::string_view name() const;
  std::optional<std::string> Attr(std::string_view key) const;
  /// Throws kParseError naming the element when the attribute is missing.
  std::string RequireAttr(std::string_view key) const;
  /// Concatenated character data, whitespace-trimmed.
  std::string Text() const;
  std::vector<Element> Children() const;
  std::vector<Element> Children(std::string_view name) const;
  /// Exactly one child with this name, else kParseError.
  Element RequireChild(std::string_view name) const;

  int line() const;
  const std::string& path() const { return path_; }

  /// kParseError carrying the element path and line.
  [[noreturn]] void Fail(const std::string& what) const;

 private:
  friend class Document;
  Element(const Document* doc, const void* node, std::string path)
      : doc_(doc), node_(node), path_(std::move(path)) {}

  const Document* doc_;
  const void* node_;
  std::string path_;
};

/// Parsed XML document. Malformed input throws kParseError with the line.
class Document {
 public:
  explicit Document(std::string_view text);
  ~Document();
  Document(const Document&) = delete;
  Document& operator=(const Document&) = delete;

  Element Root() const;

 private:
  friend class Element;
  int LineOf(const char* p) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Escapes &, <, >, " and ' for attribute and text content.
std::string Escape(std::string_view raw);

}  // namespace ctxwatch::xml

#endif  // CTXWATCH_SRC_XML_XML_UTIL_HPP_
