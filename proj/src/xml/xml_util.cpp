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

#include "xml/xml_util.hpp"

#include <algorithm>
#include <cctype>

#include <cereal/macros.hpp>
#include <cereal/external/rapidxml/rapidxml.hpp>

#include "ctxwatch/error.hpp"

namespace ctxwatch::xml {

namespace rx = cereal::rapidxml;

struct Document::Impl {
  std::string original;
  std::vector<char> buffer;
  rx::xml_document<char> doc;
};

namespace {

const rx::xml_node<char>* AsNode(const void* p) {
  return static_cast<const rx::xml_node<char>*>(p);
}

std::string Trim(std::string_view s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string(b, e) : std::string();
}

}  // namespace

Document::Document(std::string_view text) : impl_(std::make_unique<Impl>()) {
  impl_->original.assign(text);
  impl_->buffer.assign(text.begin(), text.end());
  impl_->buffer.push_back('\0');
  try {
    impl_->doc.parse<0>(impl_->buffer.data());
  } catch (const rx::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                std::string("malformed XML at line ") +
                    std::to_string(LineOf(e.where<char>())) + ": " + e.what());
  }
  if (impl_->doc.first_node() == nullptr) {
    throw Error(ErrorCode::kParseError, "document has no root element");
  }
}

Document::~Document() = default;

Element Document::Root() const {
  const auto* root = impl_->doc.first_node();
  return Element(this, root,
                 "/" + std::string(root->name(), root->name_size()));
}

int Document::LineOf(const char* p) const {
  const char* begin = impl_->buffer.data();
  if (p == nullptr || p < begin || p > begin + impl_->original.size()) return 0;
  auto offset = static_cast<std::size_t>(p - begin);
  return 1 + static_cast<int>(std::count(impl_->original.begin(),
                                         impl_->original.begin() + offset, '\n'));
}

std::string_view Element::name() const {
  const auto* n = AsNode(node_);
  return {n->name(), n->name_size()};
}

std::optional<std::string> Element::Attr(std::string_view key) const {
  const auto* a = AsNode(node_)->first_attribute(key.data(), key.size());
  if (a == nullptr) return std::nullopt;
  return std::string(a->value(), a->value_size());
}

std::string Element::RequireAttr(std::string_view key) const {
  auto v = Attr(key);
  if (!v) Fail("missing attribute '" + std::string(key) + "'");
  return *v;
}

std::string Element::Text() const {
  std::string out;
  for (const auto* c = AsNode(node_)->first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_data || c->type() == rx::node_cdata) {
      out.append(c->value(), c->value_size());
    }
  }
  return Trim(out);
}

std::vector<Element> Element::Children() const {
  std::vector<Element> out;
  std::size_t i = 0;
  for (const auto* c = AsNode(node_)->first_node(); c; c = c->next_sibling()) {
    if (c->type() != rx::node_element) continue;
    out.push_back(Element(doc_, c,
                          path_ + "/" + std::string(c->name(), c->name_size()) +
                              "[" + std::to_string(++i) + "]"));
  }
  return out;
}

std::vector<Element> Element::Children(std::string_view name) const {
  std::vector<Element> out;
  for (auto& c : Children()) {
    if (c.name() == name) out.push_back(std::move(c));
  }
  return out;
}

Element Element::RequireChild(std::string_view name) const {
  auto found = Children(name);
  if (found.size() != 1) {
    Fail("expected exactly one <" + std::string(name) + "> child, found " +
         std::to_string(found.size()));
  }
  return found.front();
}

int Element::line() const { return doc_->LineOf(AsNode(node_)->name()); }

void Element::Fail(const std::string& what) const {
  throw Error(ErrorCode::kParseError,
              path_ + " (line " + std::to_string(line()) + "): " + what);
}

std::string Escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace ctxwatch::xml
