// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/prompt_builder.hpp"

namespace code2api::prompt {

namespace {

FewShotExample make(Language language, std::int64_t id, std::string title, std::string question,
                    std::string answer, std::string snippet, std::vector<std::string> steps,
                    std::string code) {
  FewShotExample ex;
  ex.context.question_id = id;
  ex.context.answer_id = id;
  ex.context.question_title = std::move(title);
  ex.context.question_body = std::move(question);
  ex.context.answer_body = std::move(answer);
  ex.context.code_snippet = std::move(snippet);
  ex.context.language = language;
  ex.context.tags = {std::string(default_tag(language))};
  ex.context.is_accepted = true;
  ex.worked_steps = std::move(steps);
  ex.complete_code = std::move(code);
  return ex;
}

std::vector<FewShotExample> java_bank() {
  const auto J = Language::kJava;
  std::vector<FewShotExample> bank;
  // The published example. Its printed complete code iterates over `ints`,
  // which is not in scope after the snippet becomes a method; the loop here
  // uses the parameter instead.
  bank.push_back(make(
      J, 1, "How to convert int[] into List<Integer> in Java?",
      "How do I convert int[] into List<Integer> in Java? ..., I'll pick that one as the best to "
      "show the fact that this functionality is not part of Java.",
      "There is no shortcut for converting from int[] to List<Integer> ..., you have to make a "
      "utility method. <the code snippet in this answer>",
      "int[] ints = {1, 2, 3};\n"
      "List<Integer> intList = new ArrayList<Integer>(ints.length);\n"
      "for (int i : ints){\n"
      "    intList.add(i);\n"
      "}",
      {"import java.util.ArrayList;import java.util.List;", "public class Chatgpt {}",
       "public static", "convertIntArrayToList", "(int[] arr)", "return intList;", "// None"},
      "import java.util.ArrayList;\n"
      "import java.util.List;\n"
      "public class Chatgpt {\n"
      "    public static List<Integer> convertIntArrayToList(int[] arr) {\n"
      "        List<Integer> intList = new ArrayList<Integer>(arr.length);\n"
      "        for (int i : arr){\n"
      "            intList.add(i);\n"
      "        }\n"
      "        return intList;\n"
      "    }\n"
      "}"));
  bank.push_back(make(
      J, 2, "How do I read a text file into a String in Java?",
      "I have a file name and want the whole content as one String. ..., what is the simplest way "
      "without external libraries?",
      "Read it line by line with a BufferedReader and collect the lines ..., remember to close "
      "the reader. <the code snippet in this answer>",
      "BufferedReader reader = new BufferedReader(new FileReader(file));\n"
      "StringBuilder sb = new StringBuilder();\n"
      "String line;\n"
      "while ((line = reader.readLine()) != null) {\n"
      "    sb.append(line).append(\"\\n\");\n"
      "}\n"
      "reader.close();",
      {"import java.io.BufferedReader;import java.io.FileReader;import java.io.IOException;",
       "public class Chatgpt {}", "public static", "readFileToString", "(String file)",
       "return sb.toString();", "throws IOException"},
      "import java.io.BufferedReader;\n"
      "import java.io.FileReader;\n"
      "import java.io.IOException;\n"
      "public class Chatgpt {\n"
      "    public static String readFileToString(String file) throws IOException {\n"
      "        BufferedReader reader = new BufferedReader(new FileReader(file));\n"
      "        StringBuilder sb = new StringBuilder();\n"
      "        String line;\n"
      "        while ((line = reader.readLine()) != null) {\n"
      "            sb.append(line).append(\"\\n\");\n"
      "        }\n"
      "        reader.close();\n"
      "        return sb.toString();\n"
      "    }\n"
      "}"));
  bank.push_back(make(
      J, 3, "How to get the current date and time in Java?",
      "What's the best way to get the current date/time in Java and print it in a readable "
      "format? ...",
      "Use a SimpleDateFormat with the pattern you need ..., the default Date constructor gives "
      "the current time. <the code snippet in this answer>",
      "DateFormat dateFormat = new SimpleDateFormat(\"yyyy/MM/dd HH:mm:ss\");\n"
      "Date date = new Date();\n"
      "System.out.println(dateFormat.format(date));",
      {"import java.text.DateFormat;import java.text.SimpleDateFormat;import java.util.Date;",
       "public class Chatgpt {}", "public static", "printCurrentDateTime", "// None", "// None",
       "// None"},
      "import java.text.DateFormat;\n"
      "import java.text.SimpleDateFormat;\n"
      "import java.util.Date;\n"
      "public class Chatgpt {\n"
      "    public static void printCurrentDateTime() {\n"
      "        DateFormat dateFormat = new SimpleDateFormat(\"yyyy/MM/dd HH:mm:ss\");\n"
      "        Date date = new Date();\n"
      "        System.out.println(dateFormat.format(date));\n"
      "    }\n"
      "}"));
  bank.push_back(make(
      J, 4, "How to check if a String is numeric in Java?",
      "How would you check if a String was a number before parsing it? ..., it should accept "
      "decimals too.",
      "Try to parse it and treat a NumberFormatException as \"not numeric\" ..., this accepts "
      "anything Double accepts. <the code snippet in this answer>",
      "try {\n"
      "    double d = Double.parseDouble(str);\n"
      "} catch (NumberFormatException nfe) {\n"
      "    return false;\n"
      "}\n"
      "return true;",
      {"// None", "public class Chatgpt {}", "public static", "isNumeric", "(String str)",
       "return false;return true;", "// None"},
      "public class Chatgpt {\n"
      "    public static boolean isNumeric(String str) {\n"
      "        try {\n"
      "            double d = Double.parseDouble(str);\n"
      "        } catch (NumberFormatException nfe) {\n"
      "            return false;\n"
      "        }\n"
      "        return true;\n"
      "    }\n"
      "}"));
  bank.push_back(make(
      J, 5, "How do I make my program wait for a few seconds in Java?",
      "I want to print a message, pause for a while and then continue. ..., how do I pause the "
      "current thread?",
      "Thread.sleep does exactly that ..., note that it can throw InterruptedException. <the code "
      "snippet in this answer>",
      "System.out.println(\"Waiting...\");\n"
      "Thread.sleep(millis);\n"
      "System.out.println(\"Done\");",
      {"// None", "public class Chatgpt {}", "public static", "waitWithMessage", "(long millis)",
       "// None", "throws InterruptedException"},
      "public class Chatgpt {\n"
      "    public static void waitWithMessage(long millis) throws InterruptedException {\n"
      "        System.out.println(\"Waiting...\");\n"
      "        Thread.sleep(millis);\n"
      "        System.out.println(\"Done\");\n"
      "    }\n"
      "}"));
  return bank;
}

std::vector<FewShotExample> python_bank() {
  const auto P = Language::kPython;
  std::vector<FewShotExample> bank;
  bank.push_back(make(
      P, 101, "How to convert a list of strings into integers in Python?",
      "I have a list like ['1', '2', '3'] and need [1, 2, 3]. ..., is there something shorter "
      "than a loop?",
      "A list comprehension does it in one line ..., int() parses each item. <the code snippet in "
      "this answer>",
      "strings = ['1', '2', '3']\n"
      "numbers = [int(s) for s in strings]\n"
      "print(numbers)",
      {"# None", "def", "convert_strings_to_ints", "(strings)", "return numbers", "# None"},
      "def convert_strings_to_ints(strings):\n"
      "    numbers = [int(s) for s in strings]\n"
      "    return numbers"));
  bank.push_back(make(
      P, 102, "How do I read a JSON file in Python?",
      "I have a data.json file and want to load it as a dictionary. ..., what is the standard "
      "way?",
      "Use the json module from the standard library ..., json.load reads from a file object. "
      "<the code snippet in this answer>",
      "import json\n"
      "with open('data.json') as f:\n"
      "    data = json.load(f)\n"
      "print(data)",
      {"import json", "def", "read_json_file", "(path)", "return data", "# None"},
      "import json\n"
      "\n"
      "def read_json_file(path):\n"
      "    with open(path) as f:\n"
      "        data = json.load(f)\n"
      "    return data"));
  bank.push_back(make(
      P, 103, "How to check if a file exists in Python?",
      "How do I check whether a file exists or not, without using the try statement? ...",
      "os.path.isfile returns True only for existing regular files ..., use os.path.exists for "
      "directories too. <the code snippet in this answer>",
      "import os.path\n"
      "if os.path.isfile(fname):\n"
      "    print(\"exists\")\n"
      "else:\n"
      "    print(\"missing\")",
      {"import os.path", "def", "file_exists", "(fname)", "return os.path.isfile(fname)",
       "# None"},
      "import os.path\n"
      "\n"
      "def file_exists(fname):\n"
      "    return os.path.isfile(fname)"));
  bank.push_back(make(
      P, 104, "How do I raise an error for negative numbers in Python?",
      "I parse user input and want to reject negative values with a clear error. ..., which "
      "exception should I use?",
      "ValueError is the conventional choice for a bad value ..., include the value in the "
      "message. <the code snippet in this answer>",
      "value = int(text)\n"
      "if value < 0:\n"
      "    raise ValueError(\"negative value: %d\" % value)\n"
      "print(value)",
      {"# None", "def", "parse_non_negative_int", "(text)", "return value", "raise ValueError"},
      "def parse_non_negative_int(text):\n"
      "    value = int(text)\n"
      "    if value < 0:\n"
      "        raise ValueError(\"negative value: %d\" % value)\n"
      "    return value"));
  bank.push_back(make(
      P, 105, "How to print the current time in Python?",
      "I need to show the current time as hours:minutes:seconds. ...",
      "datetime.now() gives the current local time ..., format it with strftime. <the code "
      "snippet in this answer>",
      "from datetime import datetime\n"
      "now = datetime.now()\n"
      "print(now.strftime(\"%H:%M:%S\"))",
      {"from datetime import datetime", "def", "print_current_time", "# None", "# None",
       "# None"},
      "from datetime import datetime\n"
      "\n"
      "def print_current_time():\n"
      "    now = datetime.now()\n"
      "    print(now.strftime(\"%H:%M:%S\"))"));
  return bank;
}

}  // namespace

const std::vector<FewShotExample>& builtin_bank(Language language) {
  static const std::vector<FewShotExample> kJava = java_bank();
  static const std::vector<FewShotExample> kPython = python_bank();
  return language == Language::kJava ? kJava : kPython;
}

}  // namespace code2api::prompt
