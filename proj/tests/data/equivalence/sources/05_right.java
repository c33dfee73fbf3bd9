public class Api {
    public static String shorten(String s, int n) {
        String result = s.substring(0, n);
        return result;
    }
}
