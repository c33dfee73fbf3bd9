public class Api {
    public static void beep() {
        System.out.print("\007");
    }
}
