import java.util.ArrayList;
import java.util.List;

public class StringArrays {
    public static String[] removeItemFromStringArray(String[] str_array, String item) {
        List<String> list = new ArrayList<String>();
        for (String s : str_array) {
            if (!s.equals(item)) {
                list.add(s);
            }
        }
        str_array = list.toArray(new String[0]);
        return str_array;
    }
}
