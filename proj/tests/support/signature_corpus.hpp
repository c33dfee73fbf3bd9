// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

// Thirty declaration fixtures with their expected parse, written out by hand.
// The expected columns are the oracle: they were derived by reading each
// fixture, not by running the parser.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "code2api/language.hpp"

namespace code2api::testing {

struct SignatureCase {
  const char* id;
  Language language;
  const char* source;
  const char* method_name;
  std::vector<std::pair<std::string, std::string>> params;  // (type, name)
  const char* return_type;
  std::vector<std::string> throws;
  std::vector<std::string> returns;
  std::vector<std::string> imports;
};

inline const std::vector<SignatureCase>& signature_corpus() {
  static const std::vector<SignatureCase> kCases = {
      {"java-int-list", Language::kJava,
       R"(import java.util.ArrayList;
import java.util.List;
public class Chatgpt {
    public static List<Integer> convertIntArrayToList(int[] arr) {
        List<Integer> intList = new ArrayList<Integer>(arr.length);
        for (int i : arr){
            intList.add(i);
        }
        return intList;
    }
})",
       "convertIntArrayToList", {{"int[]", "arr"}}, "List<Integer>", {}, {"return intList"},
       {"java.util.ArrayList", "java.util.List"}},

      {"java-main", Language::kJava, "public static void main(String[] args){}", "main",
       {{"String[]", "args"}}, "void", {}, {}, {}},

      {"java-varargs", Language::kJava,
       R"(public class U {
    public static int sum(int... values) {
        int s = 0;
        for (int v : values) s += v;
        return s;
    }
})",
       "sum", {{"int...", "values"}}, "int", {}, {"return s"}, {}},

      {"java-generic-method", Language::kJava,
       R"(public class G {
    public static <T extends Comparable<T>> T max(List<? extends T> items) {
        T best = null;
        for (T t : items) {
            if (best == null || t.compareTo(best) > 0) best = t;
        }
        return best;
    }
})",
       "max", {{"List<? extends T>", "items"}}, "T", {}, {"return best"}, {}},

      {"java-throws", Language::kJava,
       R"(import java.io.*;
public class F {
    public static String readFile(String path) throws IOException, FileNotFoundException {
        BufferedReader r = new BufferedReader(new FileReader(path));
        try {
            return r.readLine();
        } finally {
            r.close();
        }
    }
})",
       "readFile", {{"String", "path"}}, "String", {"FileNotFoundException", "IOException"},
       {"return r . readLine ( )"}, {"java.io.*"}},

      {"java-annotations", Language::kJava,
       R"(public class A {
    @Override
    public String toString() { return "A"; }

    @Deprecated
    public static int old(@SuppressWarnings("unused") int x) { return x; }
})",
       "toString", {}, "String", {}, {"return \"A\""}, {}},

      {"java-private-helper-first", Language::kJava,
       R"(public class H {
    private static int helper(int a) { return a * 2; }
    public static int doubled(int n) { return helper(n); }
})",
       "doubled", {{"int", "n"}}, "int", {}, {"return helper ( n )"}, {}},

      {"java-qualified-types", Language::kJava,
       R"(public class Q {
    public static java.util.List<java.lang.String> names(java.util.Map<String, Integer> m) {
        return new java.util.ArrayList<>(m.keySet());
    }
})",
       "names", {{"Map<String,Integer>", "m"}}, "List<String>", {},
       {"return new java . util . ArrayList < > ( m . keySet ( ) )"}, {}},

      {"java-c-style-array", Language::kJava,
       R"(public class C {
    public static int first(int arr[]) { return arr[0]; }
})",
       "first", {{"int[]", "arr"}}, "int", {}, {"return arr [ 0 ]"}, {}},

      {"java-nested-returns", Language::kJava,
       R"(public class R {
    public static int sign(int x) {
        if (x > 0) {
            return 1;
        } else if (x < 0) {
            return -1;
        }
        for (int i = 0; i < 1; i++) {
            if (i == x) return 0;
        }
        return 0;
    }
})",
       "sign", {{"int", "x"}}, "int", {}, {"return 1", "return - 1", "return 0", "return 0"},
       {}},

      {"java-lambda-block", Language::kJava,
       R"(import java.util.*;
public class L {
    public static List<String> sorted(List<String> in) {
        Collections.sort(in, (a, b) -> { return a.compareTo(b); });
        return in;
    }
})",
       "sorted", {{"List<String>", "in"}}, "List<String>", {}, {"return in"}, {"java.util.*"}},

      {"java-anonymous-class", Language::kJava,
       R"(public class An {
    public static Runnable task(final String msg) {
        Runnable r = new Runnable() {
            public void run() {
                System.out.println(msg);
                return;
            }
        };
        return r;
    }
})",
       "task", {{"String", "msg"}}, "Runnable", {}, {"return r"}, {}},

      {"java-bare-return", Language::kJava,
       R"(public class V {
    public static void log(String s) {
        if (s == null) return;
        System.out.println(s);
    }
})",
       "log", {{"String", "s"}}, "void", {}, {"return"}, {}},

      {"java-nested-generics", Language::kJava,
       R"(import java.util.Map;
import java.util.HashMap;
import java.util.List;
public class M {
    public static Map<String, List<Integer>> group(List<String> words) {
        Map<String, List<Integer>> out = new HashMap<>();
        return out;
    }
})",
       "group", {{"List<String>", "words"}}, "Map<String,List<Integer>>", {}, {"return out"},
       {"java.util.HashMap", "java.util.List", "java.util.Map"}},

      {"java-static-import", Language::kJava,
       R"(import static java.lang.Math.max;
public class S {
    public static int[] clamp(int[] values, int lo) {
        int[] out = new int[values.length];
        for (int i = 0; i < values.length; i++) out[i] = max(values[i], lo);
        return out;
    }
})",
       "clamp", {{"int[]", "values"}, {"int", "lo"}}, "int[]", {}, {"return out"},
       {"static java.lang.Math.max"}},

      {"java-bare-method", Language::kJava,
       R"(public static boolean isEmpty(String s) {
    return s == null || s.isEmpty();
})",
       "isEmpty", {{"String", "s"}}, "boolean", {}, {"return s == null || s . isEmpty ( )"}, {}},

      {"java-constructor-first", Language::kJava,
       R"(public class Box<T> {
    private T v;
    public Box(T v) { this.v = v; }
    public T get() { return v; }
})",
       "get", {}, "T", {}, {"return v"}, {}},

      {"java-nested-class", Language::kJava,
       R"(public class Outer {
    static class Inner {
        public int x() { return 1; }
    }
    public static String name() { return "outer"; }
})",
       "name", {}, "String", {}, {"return \"outer\""}, {}},

      {"java-qualified-throws", Language::kJava,
       R"(public class T2 {
    /** Writes {@code data} to f. */
    public static void write(java.io.File f, byte[] data) throws java.io.IOException {
        // write it
        java.nio.file.Files.write(f.toPath(), data);
    }
})",
       "write", {{"File", "f"}, {"byte[]", "data"}}, "void", {"IOException"}, {}, {}},

      {"java-annotation-braces", Language::kJava,
       R"(public class W {
    @SuppressWarnings({"unchecked", "rawtypes"})
    public static String braces(String s) {
        String t = "{" + s + "}";
        return t;
    }
})",
       "braces", {{"String", "s"}}, "String", {}, {"return t"}, {}},

      {"py-simple", Language::kPython,
       R"(def add(a, b):
    return a + b
)",
       "add", {{"unannotated", "a"}, {"unannotated", "b"}}, "unannotated", {}, {"return a + b"},
       {}},

      {"py-annotated", Language::kPython,
       R"(from typing import List, Dict

def count_words(words: List[str]) -> Dict[str, int]:
    counts = {}
    for w in words:
        counts[w] = counts.get(w, 0) + 1
    return counts
)",
       "count_words", {{"List[str]", "words"}}, "Dict[str,int]", {}, {"return counts"},
       {"typing.Dict", "typing.List"}},

      {"py-nested-defaults", Language::kPython,
       R"(def scale(points, factor=(1, 2), *, clip=max(0, 1)):
    return [(x * factor[0], y * factor[1]) for x, y in points]
)",
       "scale",
       {{"unannotated", "points"}, {"unannotated", "factor"}, {"unannotated", "clip"}},
       "unannotated", {},
       {"return [ ( x * factor [ 0 ] , y * factor [ 1 ] ) for x , y in points ]"}, {}},

      {"py-varargs", Language::kPython,
       R"(def log(msg: str, *args, **kwargs) -> None:
    print(msg % args, **kwargs)
)",
       "log", {{"str", "msg"}, {"*unannotated", "args"}, {"**unannotated", "kwargs"}}, "None",
       {}, {}, {}},

      {"py-decorated-nested-def", Language::kPython,
       R"(import functools

@functools.lru_cache(maxsize=None)
def fib(n: int) -> int:
    def helper(k):
        return k
    if n < 2:
        return n
    return fib(n - 1) + fib(n - 2)
)",
       "fib", {{"int", "n"}}, "int", {}, {"return n", "return fib ( n - 1 ) + fib ( n - 2 )"},
       {"functools"}},

      {"py-class-before-function", Language::kPython,
       R"(class Helper:
    def method(self):
        return 1

def top_level(x):
    return Helper().method() + x
)",
       "top_level", {{"unannotated", "x"}}, "unannotated", {},
       {"return Helper ( ) . method ( ) + x"}, {}},

      {"py-raises", Language::kPython,
       R"(import os.path
from collections import OrderedDict as OD

def read_config(path: str) -> dict:
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path) as fh:
        return dict(line.split('=', 1) for line in fh)
)",
       "read_config", {{"str", "path"}}, "dict", {"FileNotFoundError"},
       {"return dict ( line . split ( '=' , 1 ) for line in fh )"},
       {"collections.OrderedDict", "os.path"}},

      {"py-qualified-annotation", Language::kPython,
       R"(import numpy as np

def normalize(v: np.ndarray, eps: float = 1e-9) -> np.ndarray:
    return v / (np.linalg.norm(v) + eps)
)",
       "normalize", {{"ndarray", "v"}, {"float", "eps"}}, "ndarray", {},
       {"return v / ( np . linalg . norm ( v ) + eps )"}, {"numpy"}},

      {"py-multiline-header", Language::kPython,
       R"(def clamp(value,
          lo=0,
          hi=10): return max(lo, min(value, hi))
)",
       "clamp", {{"unannotated", "value"}, {"unannotated", "lo"}, {"unannotated", "hi"}},
       "unannotated", {}, {"return max ( lo , min ( value , hi ) )"}, {}},

      {"py-async-keyword-only", Language::kPython,
       R"(async def fetch(url: str, *, timeout: float = 5.0) -> Optional[bytes]:
    if not url:
        return
    data = await get(url, timeout)
    return data
)",
       "fetch", {{"str", "url"}, {"float", "timeout"}}, "Optional[bytes]", {},
       {"return", "return data"}, {}},
  };
  return kCases;
}

}  // namespace code2api::testing
