List<String> list = new ArrayList<String>();
for (String s : str_array) {
    if (!s.equals(item)) {
        list.add(s);
    }
}
str_array = list.toArray(new String[0]);
